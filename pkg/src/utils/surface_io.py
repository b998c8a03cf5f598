import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from sympy import Rational

from src.geometry.configmv import CurveRecord
from src.geometry.ellsurf import EllipticSurfaceSpec, FibreSpec, SectionData, build_ns
from src.geometry.exactmath import as_rational
from src.geometry.lattice import Lattice
from src.geometry.zariski import SurfaceModel
from src.utils.errors import Diagnostic, NokError, SurfaceFileError


class _Collector:
    def __init__(self, path: str):
        self.path = path
        self.diagnostics: List[Diagnostic] = []

    def add(self, where: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(f"{self.path}:{where}", message))

    def raise_if_any(self) -> None:
        if self.diagnostics:
            raise SurfaceFileError(self.diagnostics)


def _load_json(data: Union[bytes, str], diags: _Collector) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            diags.add(f"byte {e.start}", "file is not valid UTF-8")
            diags.raise_if_any()
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        diags.add(f"{e.lineno}:{e.colno}", e.msg)
        diags.raise_if_any()


def _int(value, where: str, diags: _Collector) -> Optional[int]:
    if isinstance(value, bool) or not isinstance(value, int):
        diags.add(where, f"expected an integer, got {value!r}")
        return None
    return value


def _rational(value, where: str, diags: _Collector) -> Optional[Rational]:
    if isinstance(value, float):
        diags.add(where, f"floating-point literal {value!r}; write exact fractions as \"p/q\"")
        return None
    try:
        return as_rational(value)
    except NokError:
        diags.add(where, f"expected an integer or a \"p/q\" fraction, got {value!r}")
        return None


def _vector(value, where: str, diags: _Collector, length: Optional[int], integral: bool = False):
    if not isinstance(value, list):
        diags.add(where, "expected a list of coordinates")
        return None
    if length is not None and len(value) != length:
        diags.add(where, f"expected {length} coordinates, got {len(value)}")
        return None
    coords = []
    for k, v in enumerate(value):
        c = _int(v, f"{where}[{k}]", diags) if integral else _rational(v, f"{where}[{k}]", diags)
        if c is None:
            return None
        coords.append(c)
    return tuple(coords)


def _elliptic_spec(block: Any, diags: _Collector) -> Optional[EllipticSurfaceSpec]:
    where = "$.elliptic"
    if not isinstance(block, dict):
        diags.add(where, "expected an object")
        return None
    chi = _int(block.get("chi"), f"{where}.chi", diags)
    fibres = []
    for k, text in enumerate(block.get("fibres", [])):
        try:
            fibres.append(FibreSpec.parse(str(text)))
        except NokError as e:
            diags.add(f"{where}.fibres[{k}]", str(e))
    sections = []
    for k, entry in enumerate(block.get("sections", [])):
        at = f"{where}.sections[{k}]"
        if not isinstance(entry, dict) or "label" not in entry:
            diags.add(at, "expected an object with a label")
            continue
        pairings = {}
        for other, value in dict(entry.get("pairings", {})).items():
            v = _int(value, f"{at}.pairings.{other}", diags)
            if v is not None:
                pairings[str(other)] = v
        po = _int(entry.get("pairing_with_zero", 0), f"{at}.pairing_with_zero", diags)
        sections.append(SectionData(str(entry["label"]), po or 0, pairings, bool(entry.get("torsion", False))))
    rho = block.get("rho")
    if rho is not None:
        rho = _int(rho, f"{where}.rho", diags)
    if chi is None:
        return None
    return EllipticSurfaceSpec(
        chi=chi,
        base_genus=int(block.get("base_genus", 0)),
        fibres=tuple(fibres),
        sections=tuple(sections),
        declared_rho=rho,
    )


def parse_surface(data: Union[bytes, str], path: Union[str, Path] = "<input>") -> SurfaceModel:
    """Parse and validate a `.surface` file.

    Raises:
        SurfaceFileError: One diagnostic per failed check, located by JSON path.
    """
    diags = _Collector(str(path))
    doc = _load_json(data, diags)
    if not isinstance(doc, dict):
        diags.add("$", "expected a JSON object")
        diags.raise_if_any()

    name = str(doc.get("name", Path(str(path)).stem))
    elliptic = None
    if "elliptic" in doc:
        elliptic = _elliptic_spec(doc["elliptic"], diags)
        for key in ("ns_gram", "curves", "basis"):
            if key in doc:
                diags.add(f"$.{key}", "must be omitted when an elliptic block generates it")
        diags.raise_if_any()
        try:
            ns = build_ns(elliptic)
        except NokError as e:
            diags.add("$.elliptic", str(e))
            diags.raise_if_any()
        rho = ns.rho
        gram = ns.lattice.gram
        basis = ns.lattice.labels
        curves = ns.curve_records()
        if "rho" in doc and doc["rho"] != rho:
            diags.add("$.rho", f"file says rho = {doc['rho']}, the elliptic block gives {rho}")
    else:
        rho = _int(doc.get("rho"), "$.rho", diags)
        gram_rows = doc.get("ns_gram")
        if rho is None or not isinstance(gram_rows, list) or len(gram_rows) != rho:
            diags.add("$.ns_gram", f"expected {rho} rows")
            diags.raise_if_any()
        rows = [_vector(row, f"$.ns_gram[{i}]", diags, rho, integral=True) for i, row in enumerate(gram_rows)]
        diags.raise_if_any()
        gram = tuple(rows)
        basis = tuple(str(b) for b in doc.get("basis", [f"v{i + 1}" for i in range(rho)]))
        curves = []
        for k, entry in enumerate(doc.get("curves", [])):
            at = f"$.curves[{k}]"
            if not isinstance(entry, dict) or "label" not in entry or "class" not in entry:
                diags.add(at, "expected an object with label and class")
                continue
            cls = _vector(entry["class"], f"{at}.class", diags, rho, integral=True)
            if cls is None:
                continue
            record = CurveRecord.from_class(str(entry["label"]), cls, gram, bool(entry.get("irreducible", True)))
            if "self_intersection" in entry and entry["self_intersection"] != record.self_intersection:
                diags.add(
                    f"{at}.self_intersection",
                    f"recorded {entry['self_intersection']}, Gram gives {record.self_intersection}",
                )
            if entry.get("negative") and not record.negative:
                diags.add(at, f"{record.label} is declared negative but has square {record.self_intersection}")
            curves.append(record)
        diags.raise_if_any()

    known = {label: tuple(Rational(v) for v in (1 if j == i else 0 for j in range(rho))) for i, label in enumerate(basis)}
    known.update({c.label: tuple(Rational(v) for v in c.cls) for c in curves})
    generators: List[Tuple[Optional[str], Tuple[Rational, ...]]] = []
    for k, entry in enumerate(doc.get("effective_generators", [])):
        at = f"$.effective_generators[{k}]"
        if isinstance(entry, str):
            if entry not in known:
                diags.add(at, f"unknown label {entry!r}")
                continue
            generators.append((entry, known[entry]))
        elif isinstance(entry, dict):
            vec = _vector(entry.get("class"), f"{at}.class", diags, rho)
            if vec is not None:
                generators.append((entry.get("label"), vec))
        else:
            vec = _vector(entry, at, diags, rho)
            if vec is not None:
                generators.append((None, vec))
    diags.raise_if_any()

    model = SurfaceModel(
        name=name,
        rho=rho,
        ns_gram=tuple(tuple(row) for row in gram),
        basis_labels=tuple(basis),
        curves=tuple(curves),
        effective_generators=tuple(generators),
        all_negatives_are_minus2=bool(doc.get("all_negatives_are_minus2", False)),
        elliptic=elliptic,
    )
    for where, message in model.validate():
        diags.add(f"$.{where}", message)
    diags.raise_if_any()
    return model


def load_surface(path: Union[str, Path]) -> SurfaceModel:
    path = Path(path)
    return parse_surface(path.read_bytes(), path)


def _exact(value) -> Union[int, str]:
    value = Rational(value)
    return int(value) if value.q == 1 else f"{value.p}/{value.q}"


def serialize_surface(model: SurfaceModel) -> str:
    """Expanded `.surface` text; `parse_surface` reads it back to an equal model."""
    doc: Dict[str, Any] = {
        "name": model.name,
        "rho": model.rho,
        "basis": list(model.basis_labels),
        "ns_gram": [list(row) for row in model.ns_gram],
        "curves": [
            {
                "label": c.label,
                "class": list(c.cls),
                "self_intersection": c.self_intersection,
                "irreducible": c.irreducible,
            }
            for c in model.curves
        ],
        "effective_generators": [
            {"label": label, "class": [_exact(v) for v in vec]} for label, vec in model.effective_generators
        ],
        "all_negatives_are_minus2": model.all_negatives_are_minus2,
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_lattice(data: Union[bytes, str], path: Union[str, Path] = "<input>") -> Lattice:
    """Read `{"name": ..., "gram": [[...]], "labels": [...]}`."""
    diags = _Collector(str(path))
    doc = _load_json(data, diags)
    if not isinstance(doc, dict) or not isinstance(doc.get("gram"), list):
        diags.add("$.gram", "expected a Gram matrix")
        diags.raise_if_any()
    n = len(doc["gram"])
    rows = [_vector(row, f"$.gram[{i}]", diags, n, integral=True) for i, row in enumerate(doc["gram"])]
    diags.raise_if_any()
    try:
        return Lattice(gram=tuple(rows), labels=tuple(doc.get("labels", ())), name=str(doc.get("name", "")))
    except NokError as e:
        diags.add("$.gram", str(e))
        diags.raise_if_any()


def serialize_lattice(lattice: Lattice) -> str:
    return json.dumps(
        {"name": lattice.name, "rank": lattice.rank, "gram": [list(r) for r in lattice.gram], "labels": list(lattice.labels)},
        indent=2,
    ) + "\n"


def parse_elliptic_spec(data: Union[bytes, str], path: Union[str, Path] = "<input>") -> EllipticSurfaceSpec:
    """Read fibration data, either a whole `.surface` file with an `elliptic` block or the bare block."""
    diags = _Collector(str(path))
    doc = _load_json(data, diags)
    block = doc.get("elliptic", doc) if isinstance(doc, dict) else doc
    spec = _elliptic_spec(block, diags)
    diags.raise_if_any()
    return spec
