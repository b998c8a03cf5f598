import itertools
import logging
from argparse import ArgumentParser, Namespace
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from sympy import Rational

from src.command.base import BaseCommand, get_surface_argparser
from src.command.mv import surface_mv
from src.command.nob import polygon_json
from src.geometry.nob import FlagSpec, NOBPolygon, count_vertices, polygon
from src.geometry.zariski import SurfaceModel
from src.utils.divisor_expr import format_class
from src.utils.errors import FlagInNegativePartError, NotBigError, PreconditionError, UnboundedError

logger = logging.getLogger(__name__)

# outcomes that rule out one (D, flag) pair; anything else is a real failure
CANDIDATE_FAILURES = (NotBigError, FlagInNegativePartError, UnboundedError, PreconditionError)


def get_search_argparser() -> ArgumentParser:
    parser = get_surface_argparser()
    parser.add_argument("--target", type=int, required=True, help="number of vertices to look for")
    parser.add_argument("--coeff-min", dest="coeff_min", type=int, default=-3)
    parser.add_argument("--coeff-max", dest="coeff_max", type=int, default=6)
    return parser


@dataclass(frozen=True)
class SearchResult:
    found: bool
    target: int
    tried: int
    skipped: int = 0
    divisor: Optional[Tuple[Rational, ...]] = None
    flag: Optional[FlagSpec] = None
    polygon: Optional[NOBPolygon] = None


def is_ample(model: SurfaceModel, coords) -> bool:
    """Positive against every listed curve and effective generator, with positive square."""
    if model.dot(coords, coords) <= 0:
        return False
    if any(model.dot(coords, c.cls) <= 0 for c in model.curves):
        return False
    return all(model.dot(coords, g) > 0 for g in model.generator_vectors)


def ample_grid(model: SurfaceModel, coeff_min: int, coeff_max: int) -> Iterator[Tuple[int, ...]]:
    for coords in itertools.product(range(coeff_min, coeff_max + 1), repeat=model.rho):
        if is_ample(model, coords):
            yield coords


def flag_grid(model: SurfaceModel) -> Iterator[FlagSpec]:
    """Every listed irreducible curve with a general point, then with p on one other curve Cᵢ
    at each local multiplicity 1..Cᵢ·C."""
    for curve in model.curves:
        if not curve.irreducible:
            continue
        yield FlagSpec(curve.label)
        for other in model.curves:
            if other.label == curve.label:
                continue
            meet = int(model.dot(other.cls, curve.cls))
            for mult in range(1, meet + 1):
                yield FlagSpec(curve.label, {other.label: mult})


def search_vertices(
    model: SurfaceModel,
    target: int,
    coeff_min: int = -3,
    coeff_max: int = 6,
    mv: Optional[int] = None,
) -> SearchResult:
    """First (D, flag) in grid order whose polygon has exactly `target` vertices.

    Args:
        model (SurfaceModel): Surface with a finitely generated effective cone.
        target (int): Vertex count, between 3 and mv(S).
        coeff_min (int, optional): Smallest divisor coordinate. Defaults to -3.
        coeff_max (int, optional): Largest divisor coordinate. Defaults to 6.
        mv (int, optional): mv(S) if already known.

    Returns:
        SearchResult: The hit, or `found=False` with the number of polygons tried.
        Candidates ruled out by `CANDIDATE_FAILURES` are counted as skipped; any
        other error propagates.
    """
    model.require_polyhedral("search")
    if mv is None:
        mv = surface_mv(model).mv_value
    if not 3 <= target <= mv:
        raise PreconditionError(f"target {target} outside [3, mv = {mv}]")
    tried = skipped = 0
    for coords in ample_grid(model, coeff_min, coeff_max):
        for flag in flag_grid(model):
            try:
                poly = polygon(model, coords, flag)
            except CANDIDATE_FAILURES as e:
                logger.debug("skipping D = %s, flag %s: %s", coords, flag.describe(), e)
                skipped += 1
                continue
            tried += 1
            if count_vertices(poly) == target:
                return SearchResult(True, target, tried, skipped, tuple(Rational(c) for c in coords), flag, poly)
    return SearchResult(False, target, tried, skipped)


class SearchCommand(BaseCommand):
    def __init__(self, command: str = "search", args: Namespace = None):
        if args is None:
            args = get_search_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        model = self.load_model()
        result = search_vertices(model, self.args.target, self.args.coeff_min, self.args.coeff_max)
        payload = {
            "surface": model.name,
            "target": result.target,
            "found": result.found,
            "tried": result.tried,
            "skipped": result.skipped,
        }
        if result.found:
            payload["divisor"] = format_class(result.divisor, model.basis_labels)
            payload["flag"] = result.flag.describe()
            payload["polygon"] = polygon_json(result.polygon)
        return payload

    def render(self, result):
        if not result["found"]:
            self.logger.print(
                f"no polygon with {result['target']} vertices in the grid "
                f"({result['tried']} polygons tried, {result['skipped']} skipped)",
                markup=False,
            )
            return
        vertices = ", ".join(f"({t}, {s})" for t, s in result["polygon"]["vertices"])
        self.logger.print(
            f"{result['target']} vertices: D = {result['divisor']}, flag {result['flag']} "
            f"after {result['tried']} polygons",
            markup=False,
        )
        self.logger.print(f"vertices: {vertices}", markup=False)
