"""Verification reports: curvature data of a metric compared against the printed values"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import jsonschema

from catalog import (CATALOG_NOTES, THEOREM_FAMILIES, family, group, law_fixes_frame, metric,
                     parse_coordinate_metric, printed_heisenberg_inverse, printed_heisenberg_law)
from curvature import (curvature_from_riemann, frame_connection_matrix, frame_curvature_matrix,
                       ricci)
from forms import (COORDINATE, PLACEHOLDER_NAMES, Basis, KForm, LinearDiffExpr, VectorField, change_basis,
                   lie_derivative_template, pairing)
from logger import get_logger
from nilsoliton import __version__
from ring import ONE, ZERO, Scalar, parse_scalar
from soliton import (SolitonCertificate, SolutionSpace, check_theorem, classify, printed_candidate, pde_system,
                     substitute as substitute_extended)
from utils import load_fixtures, load_schema, parse_entry_key, render_value

logger = get_logger()

SCHEMA_VERSION = 1
SAMPLE_POINT = (1, 2, 3, 4)

# printed law used by the statement for H3xR, kept for the invariance check
_PRINTED_LAWS = {"H3xR": (printed_heisenberg_law, printed_heisenberg_inverse)}


def validate_dict(data: Dict[str, Any]):
    jsonschema.validate(data, load_schema())


class Report:
    """Collects the sections and the discrepancy log of one run"""

    def __init__(self, kind: str, group_id: Optional[str] = None, family_id: Optional[str] = None,
                 binding: Optional[Mapping[str, Any]] = None):
        self.kind = kind
        self.group = group_id
        self.family = family_id
        self.binding = {name: render_value(value) for name, value in sorted((binding or {}).items())}
        self.sections: Dict[str, Any] = {}
        self.discrepancy_log: List[Dict[str, str]] = []

    def add_section(self, name: str, content: Any):
        """Attach a section"""
        self.sections[name] = content

    def add_discrepancy(self, source: str, entry: str, expected: Any, computed: Any, note: Optional[str] = None):
        """Record a disagreement with a printed value"""
        item = {"source": source, "entry": entry,
                "printed": render_value(expected), "computed": render_value(computed)}
        if note:
            item["note"] = note
        self.discrepancy_log.append(item)
        logger.discrepancy(source, entry)

    def compare(self, source: str, entry: str, expected: Any, computed: Any) -> bool:
        """Exact comparison; logs a discrepancy on mismatch"""
        if expected == computed:
            return True
        self.add_discrepancy(source, entry, expected, computed)
        return False

    def to_dict(self) -> Dict[str, Any]:
        """Convert report to dictionary"""
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "kind": self.kind,
            "group": self.group,
            "family": self.family,
            "binding": self.binding,
            "sections": self.sections,
            "discrepancy_log": self.discrepancy_log,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        """Rebuild a report from its dictionary form"""
        report = cls(data["kind"], data["group"], data["family"])
        report.binding = dict(data["binding"])
        report.sections = dict(data["sections"])
        report.discrepancy_log = list(data["discrepancy_log"])
        return report

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def validate(self):
        """Validate against the committed JSON schema"""
        validate_dict(self.to_dict())

    def save(self, path: str):
        """Save report to file"""
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    def summary(self) -> str:
        """Generate a human-readable summary"""
        lines = ["=" * 60]
        title = self.kind.upper()
        if self.family:
            title += f": {self.family}"
        lines.append(title)
        lines.append("=" * 60)
        if self.group:
            lines.append(f"Group: {self.group}")
        if self.binding:
            lines.append("Binding: " + ", ".join(f"{k}={v}" for k, v in self.binding.items()))
        for name, content in self.sections.items():
            lines.append(f"\n[{name}]")
            lines.extend(_summary_lines(content))
        lines.append(f"\nDiscrepancies: {len(self.discrepancy_log)}")
        for item in self.discrepancy_log:
            lines.append(f"  - {item['source']} {item['entry']}: printed {item['printed']}, computed {item['computed']}")
        lines.append("=" * 60)
        return "\n".join(lines)


def _summary_lines(content: Any, indent: str = "  ") -> List[str]:
    if isinstance(content, dict):
        lines = []
        for key, value in content.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{indent}{key}:")
                lines.extend(_summary_lines(value, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {value}")
        return lines
    if isinstance(content, list):
        lines = []
        for item in content:
            if isinstance(item, (dict, list)):
                lines.extend(_summary_lines(item, indent))
                lines.append("")
            else:
                lines.append(f"{indent}- {item}")
        return lines
    return [f"{indent}{content}"]


# -- parsing printed values ------------------------------------------------------

def frame_names(group_id: str) -> Dict[str, KForm]:
    """omega1..omega4 and omegaIJ = omegaI∧omegaJ in the frame basis of a group"""
    basis = Basis.frame(group_id)
    names = {f"omega{i + 1}": KForm.basic([i], basis) for i in range(4)}
    for i in range(4):
        for j in range(i + 1, 4):
            names[f"omega{i + 1}{j + 1}"] = KForm.basic([i, j], basis)
    return names


def coordinate_names() -> Dict[str, KForm]:
    return {f"d{c}": KForm.basic([i]) for i, c in enumerate("xyzw")}


def parse_frame_form(text: str, group_id: str, degree: int):
    value = parse_scalar(text, names=frame_names(group_id))
    if isinstance(value, Scalar):
        if value:
            raise ValueError(f"expected a {degree}-form, got {text!r}")
        return KForm(degree, {}, Basis.frame(group_id))
    return value


def parse_placeholder_expr(text: str) -> LinearDiffExpr:
    value = parse_scalar(text, names=PLACEHOLDER_NAMES)
    if isinstance(value, Scalar):
        if value:
            raise ValueError(f"expected an expression in P1..P4, got {text!r}")
        return LinearDiffExpr()
    return value


def substitute(value: Any, binding: Mapping[str, Any]) -> Any:
    """Apply a parameter binding to a printed value"""
    if not binding:
        return value
    if isinstance(value, Scalar):
        return value.subs(binding)
    if isinstance(value, KForm):
        return KForm(value.degree, {k: v.subs(binding) for k, v in value.components.items()}, value.basis)
    if isinstance(value, LinearDiffExpr):
        return LinearDiffExpr({k: v.subs(binding) for k, v in value.terms.items()})
    return value


def _entry(i: int, j: int) -> str:
    return f"({i + 1},{j + 1})"


# -- sections -------------------------------------------------------------------

def structure_check(group_id: str, report: Report) -> Dict[str, Any]:
    """Coframe, duality, structure equations, brackets and left invariance of a group"""
    fixtures = load_fixtures()
    spec = group(group_id)
    basis = spec.basis
    section: Dict[str, Any] = {}

    coframe_ok = True
    for i, text in enumerate(fixtures["coframes"].get(group_id, [])):
        printed = parse_scalar(text, names=coordinate_names())
        computed = change_basis(KForm.basic([i], basis), COORDINATE)
        coframe_ok &= report.compare(f"coframe {group_id}", f"ω{i + 1}", printed, computed)
    section["coframe"] = [change_basis(KForm.basic([i], basis), COORDINATE).render() for i in range(4)]
    section["coframe_matches"] = coframe_ok

    section["dual"] = all(
        pairing(KForm.basic([i], basis), VectorField.basis_field(j, basis)) == (ONE if i == j else ZERO)
        for i in range(4) for j in range(4)
    )

    equations = {}
    printed_equations = fixtures["structure_equations"].get(group_id, {})
    for i in range(4):
        computed = KForm.basic([i], basis).exterior_derivative()
        equations[f"dω{i + 1}"] = computed.render()
        if str(i + 1) in printed_equations:
            printed = parse_frame_form(printed_equations[str(i + 1)], group_id, 2)
            report.compare(f"structure equations {group_id}", f"dω{i + 1}", printed, computed)
    section["structure_equations"] = equations

    brackets = {f"[X{i + 1},X{j + 1}]": f"{render_value(c)}*X{k + 1}"
                for (i, j, k), c in sorted(spec.structure_constants.items()) if i < j}
    section["brackets"] = brackets
    for key, target in fixtures["brackets"].get(group_id, {}).items():
        i, j = parse_entry_key(key)
        k = int(target.lstrip("X")) - 1
        report.compare(f"brackets {group_id}", f"[X{i + 1},X{j + 1}]", ONE,
                       Scalar.const(spec.bracket_constant(i, j, k)))

    if spec.group_law is not None:
        section["left_invariant_frame"] = not law_fixes_frame(group_id, SAMPLE_POINT)
    if group_id in _PRINTED_LAWS:
        law, law_inverse = _PRINTED_LAWS[group_id]
        moved = law_fixes_frame(group_id, SAMPLE_POINT, law, law_inverse)
        section["printed_law_moves"] = [f"X{i + 1}" for i in moved]
        for note in CATALOG_NOTES:
            if moved and note["source"] == f"group law {group_id}":
                report.add_discrepancy(note["source"], note["entry"], note["printed"], note["computed"], note["note"])
    section["notes"] = [note for note in CATALOG_NOTES if note["source"].endswith(group_id)]
    return section


def metric_section(family_id: str, g, binding: Mapping[str, Any], report: Report) -> Dict[str, Any]:
    fam = family(family_id)
    section = {
        "title": fam.title,
        "params": list(fam.params),
        "constraints": fam.describe_constraints(),
        "frame": {_entry(i, j): render_value(v) for i, j, v in g.frame_g.upper() if v},
        "coordinate": {_entry(i, j): render_value(v) for i, j, v in g.g.upper() if v},
    }
    text = load_fixtures()["coordinate_metrics"].get(family_id)
    if text is not None:
        printed = substitute(parse_coordinate_metric(text), binding)
        section["coordinate_matches_printed"] = report.compare(
            f"coordinate metric {family_id}", "g", printed, g.g)
    return section


def _form_matrix(matrix) -> Dict[str, str]:
    return {_entry(i, j): form.render() for i, row in enumerate(matrix) for j, form in enumerate(row)
            if not form.is_zero()}


def _compare_forms(family_id: str, name: str, computed, binding, report: Report, degree: int) -> Optional[bool]:
    data = load_fixtures()[name].get(family_id)
    if data is None:
        return None
    prefactor = parse_scalar(data.get("prefactor", "1"))
    group_id = family(family_id).group
    printed = {parse_entry_key(k): parse_frame_form(v, group_id, degree)
               for k, v in data["entries"].items()}
    ok = True
    for i in range(4):
        for j in range(4):
            value = printed.get((i, j))
            expected = substitute(value * prefactor, binding) if value is not None else KForm(degree, {}, computed[i][j].basis)
            if not report.compare(f"{name} {family_id}", _entry(i, j), expected, computed[i][j]):
                ok = False
    return ok


def connection_section(family_id: str, g, binding, report: Report) -> Dict[str, Any]:
    c = frame_connection_matrix(g)
    return {
        "omega": _form_matrix(c.omega),
        "matches_printed": _compare_forms(family_id, "connection", c.omega, binding, report, 1),
        "notes": load_fixtures()["connection"].get(family_id, {}).get("notes", []),
    }


def curvature_section(family_id: str, g, binding, report: Report) -> Dict[str, Any]:
    c = frame_connection_matrix(g)
    Omega = frame_curvature_matrix(c)
    two_path = curvature_from_riemann(g)
    agree = all(Omega.Omega[i][j] == two_path.Omega[i][j] for i in range(4) for j in range(4))
    return {
        "Omega": _form_matrix(Omega.Omega),
        "flat": Omega.is_zero(),
        "structure_equations_agree_with_riemann": agree,
        "matches_printed": _compare_forms(family_id, "curvature", Omega.Omega, binding, report, 2),
    }


def ricci_section(family_id: str, g, binding, report: Report) -> Dict[str, Any]:
    data = ricci(g)
    section = {
        "frame": {_entry(i, j): render_value(v) for i, j, v in data.ricci.upper() if v},
        "coordinate": {_entry(i, j): render_value(v) for i, j, v in data.coordinate.upper() if v},
        "scalar": render_value(data.scalar),
        "operator": {_entry(i, j): render_value(v) for i, row in enumerate(data.operator)
                     for j, v in enumerate(row) if v},
    }
    fixtures = load_fixtures()
    printed = fixtures["ricci"].get(family_id)
    if printed is not None:
        entries = {parse_entry_key(k): parse_scalar(v) for k, v in printed["entries"].items()}
        for i, j, v in data.ricci.upper():
            expected = substitute(entries.get((i, j), ZERO), binding)
            report.compare(f"ricci {family_id}", _entry(i, j), expected, v)
        report.compare(f"scalar curvature {family_id}", "S", substitute(parse_scalar(printed["scalar"]), binding),
                       data.scalar)
    diagonal = fixtures["ricci_operator"].get(family_id)
    if diagonal is not None:
        for i in range(4):
            for j in range(4):
                expected = substitute(parse_scalar(diagonal[i]), binding) if i == j else ZERO
                report.compare(f"ricci operator {family_id}", _entry(i, j), expected, data.operator[i][j])
    return section


def lie_derivative_section(family_id: str, binding, report: Report) -> Optional[Dict[str, Any]]:
    """Which reading of X = Σ P^i(...) the printed L_X g entries follow"""
    data = load_fixtures()["lie_derivative"].get(family_id)
    if data is None:
        return None
    own = {k: parse_scalar(v) for k, v in data.get("binding", {}).items()}
    g = metric(family_id, own or binding)
    frame = lie_derivative_template(g.frame_g, "frame")
    coordinate = lie_derivative_template(g.g, "coordinate")
    readings = {}
    for key, text in data["entries"].items():
        i, j = parse_entry_key(key)
        entry = _entry(i, j)
        if text is None:
            readings[entry] = "truncated"
            continue
        printed = parse_placeholder_expr(text)
        if not own:
            printed = substitute(printed, binding)
        if printed == frame[i][j]:
            readings[entry] = "frame"
        elif printed == coordinate[i][j]:
            readings[entry] = "coordinate"
        else:
            readings[entry] = "neither"
            report.add_discrepancy(f"lie derivative {family_id}", entry, text, frame[i][j],
                                   note="matches neither the frame nor the coordinate reading")
    return {"binding": {k: render_value(v) for k, v in own.items()}, "readings": readings,
            "notes": data.get("notes", [])}


def pde_section(family_id: str, g, binding, report: Report) -> Dict[str, Any]:
    data = load_fixtures()["pde"].get(family_id)
    alpha = parse_scalar(data["alpha"]) if data else None
    equations = pde_system(g, alpha)
    section = {"equations": [eq.render() for eq in equations], "notes": data.get("notes", []) if data else []}
    if data is not None:
        printed = {parse_entry_key(k): parse_scalar(v) for k, v in data["entries"].items()}
        for eq in equations:
            expected = substitute(printed.get((eq.i, eq.j), ZERO), binding)
            report.compare(f"pde {family_id}", _entry(eq.i, eq.j), expected, eq.constant)
    return section


# -- certificates and solution spaces -----------------------------------------

def _residual_dict(tensor) -> Dict[str, str]:
    return {_entry(i, j): render_value(v) for i, j, v in tensor.upper() if v}


def certificate_dict(cert: SolitonCertificate) -> Dict[str, Any]:
    out = {
        "theorem": cert.theorem,
        "family": cert.family,
        "alpha": render_value(cert.candidate.alpha),
        "X": [render_value(c) for c in cert.candidate.X.components],
        "is_soliton": cert.is_soliton,
        "verified": cert.verified,
        "classification": cert.classification.value,
        "claimed": cert.claimed,
        "coordinate_reading": cert.coordinate_reading,
        "residual": _residual_dict(cert.residual),
        "failing_terms": list(cert.failing_terms),
        "notes": list(cert.notes),
        "discrepancies": [dict(item) for item in cert.discrepancies],
        "resolution": None,
    }
    r = cert.resolution
    if r is not None:
        out["resolution"] = {
            "binding": {k: render_value(v) for k, v in sorted(r.binding.items())},
            "degree": r.degree,
            "trig": r.trig,
            "alpha": render_value(r.alpha) if r.alpha is not None else None,
            "classification": r.classification.value if r.classification else None,
            "dimension": r.dimension,
            "contains_printed_field": r.contains_printed_field,
            "verified": r.verified,
            "shape_terms": r.shape_terms,
            "shape_dimension": r.shape_dimension,
            "matches_shape": r.matches_shape,
            "error": r.error,
        }
    return out


def add_certificates(report: Report, certificates: List[Dict[str, Any]]):
    """Attach serialized certificates and log their discrepancies"""
    report.add_section("soliton_certificates", list(certificates))
    for cert in certificates:
        for item in cert["discrepancies"]:
            report.add_discrepancy(f"theorem {cert['theorem']} {cert['family']}", item["entry"],
                                   item["printed"], item["computed"], item.get("note"))


def space_dict(space: SolutionSpace) -> Dict[str, Any]:
    general = space.general()
    particular = space.particular_candidate()
    return {
        "degree": space.degree,
        "trig": space.trig,
        "alpha_mode": "unknown" if space.fixed_alpha is None else render_value(space.fixed_alpha),
        "unknowns": len(space.unknowns),
        "equations": space.equations,
        "dimension": space.dimension,
        "alpha": render_value(space.alpha),
        "alpha_forced": space.alpha_forced,
        "classification": None,
        "particular": [render_value(c) for c in particular.X.components],
        "basis": [{"X": [render_value(c) for c in X.components], "alpha": render_value(a)}
                  for X, a in space.basis_fields()],
        "general": [render_value(c) for c in general.X.components] if general else None,
        "verified": space.verify(),
    }


def theorem_of(family_id: str) -> Optional[int]:
    for n, families_ in THEOREM_FAMILIES.items():
        if family_id in families_:
            return n
    return None


def printed_membership(space: SolutionSpace) -> Optional[bool]:
    """Whether the printed field of the family's theorem lies in the solution set"""
    n = theorem_of(space.metric.family)
    if n is None:
        return None
    candidate = printed_candidate(n, space.metric.family)
    binding = space.metric.binding
    X = VectorField([substitute_extended(c, binding) for c in candidate.X.components], candidate.X.basis)
    return space.contains(X, substitute_extended(candidate.alpha, binding))


# -- whole reports ---------------------------------------------------------------

def build_report(family_id: str, binding: Optional[Mapping[str, Fraction]] = None) -> Report:
    """Full curvature report for one family"""
    binding = dict(binding or {})
    fam = family(family_id)
    g = metric(family_id, binding)
    report = Report("report", fam.group, family_id, binding)
    logger.info(f"Report for {family_id} ({fam.group})")
    report.add_section("structure_check", structure_check(fam.group, report))
    report.add_section("metric", metric_section(family_id, g, binding, report))
    report.add_section("connection", connection_section(family_id, g, binding, report))
    report.add_section("curvature", curvature_section(family_id, g, binding, report))
    report.add_section("ricci", ricci_section(family_id, g, binding, report))
    lie = lie_derivative_section(family_id, binding, report)
    if lie is not None:
        report.add_section("lie_derivative", lie)
    report.add_section("pde", pde_section(family_id, g, binding, report))
    n = theorem_of(family_id)
    if n is not None and not binding:
        add_certificates(report, [certificate_dict(c) for c in check_theorem(n) if c.family == family_id])
    else:
        report.add_section("soliton_certificates", [])
    return report


def check_report(certificates: List[Dict[str, Any]]) -> Report:
    """Report over serialized certificates, in the order given"""
    report = Report("check")
    add_certificates(report, certificates)
    return report


def solve_report(space: SolutionSpace) -> Report:
    g = space.metric
    report = Report("solve", g.group, g.family, g.binding)
    content = space_dict(space)
    content["contains_printed_field"] = printed_membership(space)
    content["classification"] = classify(space.alpha, g.rational_binding(),
                                         family(g.family).positive_params()).value
    report.add_section("solution_space", content)
    return report
