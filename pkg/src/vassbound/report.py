"""Analysis reports and solver-independent certificate re-verification.

A report binds every verdict to its evidence (covering normals, good normals
with their neutral sets, ranking certificates, the derivation tree) and to a
fingerprint of the canonical input text, so a stored report can only be
replayed against the exact VASS it was produced for.

recheck() re-establishes every checkable condition from scratch: short-cycle
effect sets are recomputed, covering and positivity are checked with exact
arithmetic, the good-normal contact sets are re-derived through cone
membership, restrictions are rebuilt by least-weight paths from the recorded
normals, and the recorded component split of every derivation node is
compared against the rebuilt one.  The simplex optimizer is never invoked on
this path; only cone-membership feasibility queries are.

Formats: a line-oriented text rendering (.vassrep) with exact rationals as
"p/q", and a JSON mirror (.vassrep.json) carrying the same fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import lp
from .analyzer import (
    CATEGORY_D,
    CONSTANT,
    LINEAR,
    NON_TERMINATING,
    POLYNOMIAL,
    RULE_BASE,
    RULE_FIXPOINT,
    RULE_RECURSE,
    AnalysisResult,
    DerivationTree,
    NegativeCycleDetected,
    Verdict,
    build_restriction,
)
from .core import Vass, fingerprint, scc_decompose
from .geometry import GoodNormal, good_normal_failures
from .increments import compute_inc, from_effects
from .linear import WlrCertificate, WlrEntry, entry_failures
from .oracle import OracleResult


class FingerprintMismatch(RuntimeError):
    code = "fingerprint"


FORMAT_HEADER = "vassbound-report 1"


def _fmt_rat(x: Fraction) -> str:
    return str(x)


def _fmt_vec(v) -> str:
    return "(" + ",".join(_fmt_rat(Fraction(x)) for x in v) + ")"


def _parse_rat(s: str) -> Fraction:
    return Fraction(s)


def _parse_vec(s: str) -> tuple[Fraction, ...]:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"bad vector literal {s!r}")
    inner = s[1:-1].strip()
    if not inner:
        return ()
    return tuple(Fraction(p) for p in inner.split(","))


def _parse_int_vec(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in _parse_vec(s))


@dataclass(frozen=True)
class AnalysisReport:
    vass: Vass
    result: AnalysisResult
    oracle: Optional[OracleResult] = None

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.vass)


def _tree_lines(tree: DerivationTree, indent: int) -> list[str]:
    pad = "  " * indent
    normal = _fmt_vec(tree.normal) if tree.normal is not None else "-"
    exponent = str(tree.exponent) if tree.exponent is not None else "-"
    lines = [
        f"{pad}node states={{{','.join(tree.states)}}} rule={tree.rule} "
        f"normal={normal} exponent={exponent} fingerprint={tree.fingerprint[:16]}"
    ]
    for child in tree.children:
        lines.extend(_tree_lines(child, indent + 1))
    return lines


def render_text(report: AnalysisReport) -> str:
    v = report.vass
    res = report.result
    out: list[str] = [FORMAT_HEADER]
    out.append(f"fingerprint: {report.fingerprint}")
    out.append(f"dim: {v.dimension}")
    out.append(f"states: {' '.join(v.states)}")
    out.append(f"transitions: {len(v.transitions)}")
    out.append(f"verdict: {res.overall()}")
    out.append(f"global-linear: {'yes' if res.is_linear else 'no'}")
    if res.linear_blame is not None:
        out.append(f"global-blame: {{{','.join(res.linear_blame)}}}")
    if res.linear_certificate is not None:
        for entry in res.linear_certificate.entries:
            out.extend(_wlr_lines(entry, "global-wlr"))
    for scc in res.sccs:
        verdict = scc.verdict
        out.append(f"scc: {{{','.join(scc.states)}}}")
        out.append(f"  category: {_category_tag(verdict)}")
        cat = verdict.category
        if cat is not None:
            if cat.good is not None:
                out.append(f"  good-normal: {_fmt_vec(cat.good.normal)}")
                neutral = " ".join(_fmt_vec(e) for e in sorted(cat.good.neutral))
                out.append(f"  neutral: {neutral}".rstrip())
            elif cat.normal is not None:
                out.append(f"  cover-normal: {_fmt_vec(cat.normal)}")
        out.append(f"  verdict: {verdict.describe()}")
        if verdict.reason:
            out.append(f"  reason: {verdict.reason}")
        if verdict.certificate is not None:
            out.extend(_wlr_lines(verdict.certificate, "  wlr"))
        if verdict.tree is not None:
            out.append("  derivation:")
            out.extend(_tree_lines(verdict.tree, 2))
    if report.oracle is not None:
        out.append("oracle:")
        for e in report.oracle.entries:
            value = e.value if e.value is not None else "-"
            out.append(f"  n={e.n} L={value} status={e.status}")
    return "\n".join(out) + "\n"


def _category_tag(verdict: Verdict) -> str:
    if verdict.category is not None:
        return verdict.category.tag
    return "-" if verdict.kind == CONSTANT else "?"


def _wlr_lines(entry: WlrEntry, label: str) -> list[str]:
    weights = " ".join(
        f"{q}={_fmt_rat(entry.weights[q])}" for q in entry.states
    )
    return [
        f"{label}: states={{{','.join(entry.states)}}} normal={_fmt_vec(entry.normal)} "
        f"epsilon={_fmt_rat(entry.epsilon)} weights[{weights}]"
    ]


def _tree_json(tree: DerivationTree) -> dict[str, Any]:
    return {
        "fingerprint": tree.fingerprint,
        "states": list(tree.states),
        "rule": tree.rule,
        "normal": [str(x) for x in tree.normal] if tree.normal is not None else None,
        "exponent": tree.exponent,
        "children": [_tree_json(c) for c in tree.children],
    }


def _wlr_json(entry: WlrEntry) -> dict[str, Any]:
    return {
        "states": list(entry.states),
        "normal": [str(x) for x in entry.normal],
        "epsilon": str(entry.epsilon),
        "weights": {q: str(w) for q, w in sorted(entry.weights.items())},
    }


def render_json(report: AnalysisReport) -> str:
    v = report.vass
    res = report.result
    doc: dict[str, Any] = {
        "format": FORMAT_HEADER,
        "fingerprint": report.fingerprint,
        "dim": v.dimension,
        "states": list(v.states),
        "transitions": len(v.transitions),
        "verdict": res.overall(),
        "global_linear": res.is_linear,
        "global_blame": list(res.linear_blame) if res.linear_blame else None,
        "global_wlr": [
            _wlr_json(e) for e in res.linear_certificate.entries
        ]
        if res.linear_certificate
        else None,
        "sccs": [],
        "oracle": None,
    }
    for scc in res.sccs:
        verdict = scc.verdict
        cat = verdict.category
        entry: dict[str, Any] = {
            "states": list(scc.states),
            "category": _category_tag(verdict),
            "verdict": verdict.describe(),
            "reason": verdict.reason,
            "good_normal": None,
            "neutral": None,
            "cover_normal": None,
            "wlr": _wlr_json(verdict.certificate) if verdict.certificate else None,
            "derivation": _tree_json(verdict.tree) if verdict.tree else None,
        }
        if cat is not None and cat.good is not None:
            entry["good_normal"] = [str(x) for x in cat.good.normal]
            entry["neutral"] = [list(e) for e in sorted(cat.good.neutral)]
        elif cat is not None and cat.normal is not None:
            entry["cover_normal"] = [str(x) for x in cat.normal]
        doc["sccs"].append(entry)
    if report.oracle is not None:
        doc["oracle"] = [
            {"n": e.n, "L": e.value, "status": e.status} for e in report.oracle.entries
        ]
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# Parsed (stored) reports and re-verification


@dataclass
class StoredScc:
    states: tuple[str, ...]
    category: str
    verdict: str
    good_normal: Optional[tuple[Fraction, ...]] = None
    neutral: Optional[frozenset[tuple[int, ...]]] = None
    cover_normal: Optional[tuple[Fraction, ...]] = None
    wlr: Optional[WlrEntry] = None
    derivation: Optional[dict] = None  # nested dicts: states/rule/normal/exponent/children


@dataclass
class StoredReport:
    fingerprint: str
    verdict: str
    global_linear: bool
    global_wlr: list[WlrEntry] = field(default_factory=list)
    sccs: list[StoredScc] = field(default_factory=list)


def _wlr_from_json(doc: dict[str, Any]) -> WlrEntry:
    return WlrEntry(
        tuple(doc["states"]),
        tuple(Fraction(x) for x in doc["normal"]),
        {q: Fraction(w) for q, w in doc["weights"].items()},
        Fraction(doc["epsilon"]),
    )


def _tree_from_json(doc: dict[str, Any]) -> dict:
    return {
        "states": tuple(doc["states"]),
        "rule": doc["rule"],
        "normal": tuple(Fraction(x) for x in doc["normal"]) if doc.get("normal") else None,
        "exponent": doc.get("exponent"),
        "children": [_tree_from_json(c) for c in doc.get("children", [])],
    }


def parse_report_json(text: str) -> StoredReport:
    doc = json.loads(text)
    if doc.get("format") != FORMAT_HEADER:
        raise ValueError("not a vassbound report (bad or missing format field)")
    stored = StoredReport(
        fingerprint=doc["fingerprint"],
        verdict=doc["verdict"],
        global_linear=bool(doc["global_linear"]),
    )
    for e in doc.get("global_wlr") or []:
        stored.global_wlr.append(_wlr_from_json(e))
    for s in doc.get("sccs", []):
        stored.sccs.append(
            StoredScc(
                states=tuple(s["states"]),
                category=s["category"],
                verdict=s["verdict"],
                good_normal=tuple(Fraction(x) for x in s["good_normal"])
                if s.get("good_normal")
                else None,
                neutral=frozenset(tuple(v) for v in s["neutral"])
                if s.get("neutral") is not None
                else None,
                cover_normal=tuple(Fraction(x) for x in s["cover_normal"])
                if s.get("cover_normal")
                else None,
                wlr=_wlr_from_json(s["wlr"]) if s.get("wlr") else None,
                derivation=_tree_from_json(s["derivation"]) if s.get("derivation") else None,
            )
        )
    return stored


def _parse_braced(s: str) -> tuple[str, ...]:
    s = s.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"bad state set literal {s!r}")
    inner = s[1:-1]
    return tuple(x for x in inner.split(",") if x)


def _parse_wlr_line(rest: str) -> WlrEntry:
    # states={..} normal=(..) epsilon=p/q weights[a=..; ...]
    states_part, rest = rest.split(" normal=", 1)
    states = _parse_braced(states_part.split("states=", 1)[1])
    normal_part, rest = rest.split(" epsilon=", 1)
    normal = _parse_vec(normal_part)
    eps_part, rest = rest.split(" weights[", 1)
    epsilon = _parse_rat(eps_part)
    weights_body = rest.rsplit("]", 1)[0]
    weights = {}
    for item in weights_body.split():
        q, w = item.split("=", 1)
        weights[q] = _parse_rat(w)
    return WlrEntry(states, normal, weights, epsilon)


def parse_report_text(text: str) -> StoredReport:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise ValueError("not a vassbound report (bad or missing header line)")
    stored = StoredReport(fingerprint="", verdict="", global_linear=False)
    current: Optional[StoredScc] = None
    tree_stack: list[tuple[int, dict]] = []

    for raw in lines[1:]:
        if not raw.strip():
            continue
        stripped = raw.strip()
        if stripped.startswith("node "):
            indent = (len(raw) - len(raw.lstrip())) // 2
            node = _parse_tree_line(stripped)
            while tree_stack and tree_stack[-1][0] >= indent:
                tree_stack.pop()
            if tree_stack:
                tree_stack[-1][1]["children"].append(node)
            else:
                assert current is not None
                current.derivation = node
            tree_stack.append((indent, node))
            continue
        key, _, value = stripped.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "fingerprint":
            stored.fingerprint = value
        elif key == "verdict" and current is None:
            stored.verdict = value
        elif key == "global-linear":
            stored.global_linear = value == "yes"
        elif key == "global-wlr":
            stored.global_wlr.append(_parse_wlr_line(value))
        elif key == "scc":
            current = StoredScc(states=_parse_braced(value), category="?", verdict="")
            stored.sccs.append(current)
            tree_stack = []
        elif key == "category" and current is not None:
            current.category = value
        elif key == "good-normal" and current is not None:
            current.good_normal = _parse_vec(value)
        elif key == "neutral" and current is not None:
            vecs = [p for p in value.split() if p]
            current.neutral = frozenset(_parse_int_vec(p) for p in vecs)
        elif key == "cover-normal" and current is not None:
            current.cover_normal = _parse_vec(value)
        elif key == "verdict" and current is not None:
            current.verdict = value
        elif key == "wlr" and current is not None:
            current.wlr = _parse_wlr_line(value)
        # dim/states/transitions/reason/derivation/oracle lines carry no
        # certificate content; recheck recomputes them from the input.
    return stored


def _parse_tree_line(stripped: str) -> dict:
    rest = stripped[len("node "):]
    fields: dict[str, str] = {}
    states_part, rest = rest.split("} ", 1)
    fields["states"] = states_part.split("states=", 1)[1] + "}"
    for item in rest.split():
        k, _, v = item.partition("=")
        fields[k] = v
    return {
        "states": _parse_braced(fields["states"]),
        "rule": fields["rule"],
        "normal": _parse_vec(fields["normal"]) if fields["normal"] != "-" else None,
        "exponent": int(fields["exponent"]) if fields["exponent"] != "-" else None,
        "children": [],
    }


def load_report(text: str) -> StoredReport:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_report_json(text)
    return parse_report_text(text)


# ---------------------------------------------------------------------------
# recheck


def recheck(stored: StoredReport, vass: Vass) -> tuple[bool, list[str]]:
    """Re-verify every certificate in a stored report against `vass`.

    Raises FingerprintMismatch when the report was produced for a different
    input.  Returns (ok, failures)."""
    actual = fingerprint(vass)
    if stored.fingerprint != actual:
        raise FingerprintMismatch(
            f"report fingerprint {stored.fingerprint[:16]}... does not match input {actual[:16]}..."
        )
    failures: list[str] = []

    components = {c.states: c.vass for c in scc_decompose(vass)}
    recorded = {s.states for s in stored.sccs}
    if recorded != set(components):
        failures.append(
            f"recorded SCC partition {sorted(recorded)} differs from actual {sorted(components)}"
        )
        return False, failures

    for s in stored.sccs:
        sub = components[s.states]
        label = "{" + ",".join(s.states) + "}"
        inc = compute_inc(sub)
        effects = inc.sorted_effects()
        if s.good_normal is not None:
            gn = GoodNormal(s.good_normal, s.neutral if s.neutral is not None else frozenset())
            for msg in good_normal_failures(inc, gn, cone_check=True):
                failures.append(f"scc {label}: good normal: {msg}")
        if s.cover_normal is not None:
            n = s.cover_normal
            if all(x == 0 for x in n):
                failures.append(f"scc {label}: covering normal is zero")
            for v in effects:
                if lp.dot(n, v) > 0:
                    failures.append(f"scc {label}: normal fails to cover {v}")
            if s.category == "D":
                if any(x < 0 for x in n):
                    failures.append(f"scc {label}: category D normal has a negative component")
                if all(x > 0 for x in n):
                    failures.append(f"scc {label}: category D normal is strictly positive")
            if s.category == "B" and all(x >= 0 for x in n):
                failures.append(f"scc {label}: category B normal has no negative component")
        if s.wlr is not None:
            for msg in entry_failures(sub, s.wlr):
                failures.append(f"scc {label}: wlr: {msg}")
        if s.derivation is not None:
            _recheck_tree(s.derivation, sub, failures, f"scc {label}")

    for entry in stored.global_wlr:
        key = entry.states
        if key not in components:
            failures.append(f"global wlr entry for unknown SCC {key}")
            continue
        for msg in entry_failures(components[key], entry):
            failures.append(f"global wlr {key}: {msg}")
    if stored.global_linear:
        bearing = {c.states for c in scc_decompose(vass) if c.vass.transitions}
        covered = {e.states for e in stored.global_wlr}
        if bearing - covered:
            failures.append(
                f"global linear claim lacks certificates for {sorted(bearing - covered)}"
            )

    return (not failures, failures)


def _recheck_tree(node: dict, sub: Vass, failures: list[str], where: str) -> None:
    """Walk a recorded derivation tree, rebuilding each restriction from the
    recorded normal and comparing the recorded component split."""
    inc = compute_inc(sub)
    label = f"{where} node {{{','.join(node['states'])}}}"
    if tuple(node["states"]) != sub.states and set(node["states"]) != set(sub.states):
        failures.append(f"{label}: recorded states do not match the rebuilt sub-VASS")
        return
    normal = node["normal"]
    rule = node["rule"]
    if rule == RULE_BASE and normal is None:
        return  # constant leaf: nothing to verify beyond structure
    if normal is None:
        failures.append(f"{label}: rule {rule} requires a recorded normal")
        return
    zero_set = frozenset(v for v in inc.effects if lp.dot(normal, v) == 0)
    gn = GoodNormal(normal, zero_set)
    for msg in good_normal_failures(inc, gn, cone_check=True):
        failures.append(f"{label}: normal: {msg}")
        return
    try:
        restricted = build_restriction(sub, gn)
    except NegativeCycleDetected as exc:
        failures.append(f"{label}: {exc}")
        return
    comps = [c for c in scc_decompose(restricted) if c.vass.transitions]
    if rule == RULE_BASE:
        if comps:
            failures.append(f"{label}: base rule recorded but restriction has cycles")
        return
    if rule == RULE_FIXPOINT:
        if not (
            len(comps) == 1
            and set(comps[0].vass.states) == set(sub.states)
            and set(comps[0].vass.transitions) == set(sub.transitions)
        ):
            failures.append(f"{label}: fixpoint rule recorded but restriction differs")
        return
    if rule != RULE_RECURSE:
        failures.append(f"{label}: unknown rule {rule!r}")
        return
    recorded_children = {tuple(c["states"]) for c in node["children"]}
    actual_children = {c.states for c in comps}
    if recorded_children != actual_children:
        failures.append(
            f"{label}: recorded children {sorted(recorded_children)} differ from "
            f"rebuilt components {sorted(actual_children)}"
        )
        return
    by_states = {c.states: c.vass for c in comps}
    child_exponents = []
    for child in node["children"]:
        _recheck_tree(child, by_states[tuple(child["states"])], failures, where)
        child_exponents.append(child.get("exponent"))
    if node.get("exponent") is not None and all(e is not None for e in child_exponents):
        expected = 1 + max(child_exponents) if child_exponents else 1
        if node["exponent"] != expected:
            failures.append(
                f"{label}: exponent {node['exponent']} != 1 + max(children) = {expected}"
            )
