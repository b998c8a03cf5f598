import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Rational

from src.geometry.exactmath import SolveOutcome, as_vector, solve_linear
from src.geometry.zariski import (
    SurfaceModel,
    _coords,
    _solve_on_support,
    mu_of,
    nu_of,
    volume,
    zariski_decompose,
)
from src.utils.errors import (
    ContractViolation,
    FlagInNegativePartError,
    ModelInconsistencyError,
    NotBigError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

Point = Tuple[Rational, Rational]


@dataclass(frozen=True)
class FlagSpec:
    """Flag S ⊃ C ⊃ {p}; the point enters only through local multiplicities (Cᵢ·C)_p.

    An empty `point` mapping is a general point.
    """

    curve: str
    point: Dict[str, int] = field(default_factory=dict)

    @property
    def general(self) -> bool:
        return not any(self.point.values())

    def check(self, model: SurfaceModel) -> None:
        C = model.curve(self.curve)
        if not C.irreducible:
            raise PreconditionError(f"flag curve {C.label} is not irreducible")
        for label, mult in self.point.items():
            if label == self.curve:
                raise PreconditionError(f"point data refers to the flag curve {label} itself")
            other = model.curve(label)
            bound = model.dot(other.cls, C.cls)
            if int(mult) != mult or not 0 <= mult <= bound:
                raise PreconditionError(
                    f"local multiplicity of {label} at p must be an integer in [0, {bound}], got {mult}"
                )

    def describe(self) -> str:
        if self.general:
            return f"({self.curve}, general point)"
        where = ", ".join(f"{k}:{v}" for k, v in self.point.items() if v)
        return f"({self.curve}, p with {where})"


@dataclass(frozen=True)
class Affine:
    slope: Rational
    intercept: Rational

    def __call__(self, t) -> Rational:
        return self.slope * t + self.intercept

    def __add__(self, other: "Affine") -> "Affine":
        return Affine(self.slope + other.slope, self.intercept + other.intercept)

    def scale(self, k) -> "Affine":
        return Affine(k * self.slope, k * self.intercept)

    def root(self) -> Optional[Rational]:
        if self.slope == 0:
            return None
        return -self.intercept / self.slope


@dataclass(frozen=True)
class PiecewiseLinearFn:
    breakpoints: Tuple[Rational, ...]
    pieces: Tuple[Affine, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.pieces) + 1:
            raise ContractViolation("need one more breakpoint than pieces")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ContractViolation("breakpoints must increase strictly")
        for k in range(1, len(self.pieces)):
            t = self.breakpoints[k]
            if self.pieces[k - 1](t) != self.pieces[k](t):
                raise ContractViolation(f"piecewise function is discontinuous at t = {t}")

    @classmethod
    def merged(cls, breakpoints: Sequence[Rational], pieces: Sequence[Affine]) -> "PiecewiseLinearFn":
        """Build the function, joining neighbouring pieces with the same affine formula."""
        points, kept = [breakpoints[0]], []
        for piece, end in zip(pieces, breakpoints[1:]):
            if kept and kept[-1] == piece:
                points[-1] = end
            else:
                kept.append(piece)
                points.append(end)
        return cls(tuple(points), tuple(kept))

    @property
    def domain(self) -> Tuple[Rational, Rational]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def slopes(self) -> List[Rational]:
        return [p.slope for p in self.pieces]

    def __call__(self, t) -> Rational:
        t = Rational(t)
        lo, hi = self.domain
        if t < lo or t > hi:
            raise ContractViolation(f"t = {t} outside [{lo}, {hi}]")
        for piece, end in zip(self.pieces, self.breakpoints[1:]):
            if t <= end:
                return piece(t)
        return self.pieces[-1](t)

    def is_convex(self) -> bool:
        return all(a <= b for a, b in zip(self.slopes, self.slopes[1:]))

    def is_concave(self) -> bool:
        return all(a >= b for a, b in zip(self.slopes, self.slopes[1:]))


@dataclass(frozen=True)
class SweepPiece:
    start: Rational
    end: Rational
    support: Tuple[str, ...]
    coefficients: Dict[str, Affine]
    positive_dot_flag: Affine


@dataclass(frozen=True)
class NOBPolygon:
    vertices: Tuple[Point, ...]
    alpha: PiecewiseLinearFn
    beta: PiecewiseLinearFn
    nu: Rational
    mu: Rational
    area: Rational

    def to_rows(self) -> List[Dict[str, str]]:
        return [{"vertex": k, "t": str(t), "s": str(s)} for k, (t, s) in enumerate(self.vertices)]


def _affine_solution(model: SurfaceModel, D, C, support) -> List[Affine]:
    """Coefficients a(t) = a0 + t·a1 of the negative part of D - t·C on a fixed support."""
    if not support:
        return []
    a0 = _solve_on_support(model, D, support)
    minus_C = tuple(-v for v in C)
    a1 = _solve_on_support(model, minus_C, support)
    return [Affine(s, i) for i, s in zip(a0, a1)]


def _positive_part_dot(model: SurfaceModel, D, C, support, coeffs: Sequence[Affine], other) -> Affine:
    """P_t·X as an affine function of t, where P_t = D - t·C - Σ a_i(t)·C_i."""
    intercept = model.dot(D, other)
    slope = -model.dot(C, other)
    for curve, a in zip(support, coeffs):
        pairing = model.dot(curve.cls, other)
        intercept -= a.intercept * pairing
        slope -= a.slope * pairing
    return Affine(slope, intercept)


def _right_support(model: SurfaceModel, D, C, t: Rational) -> Tuple[list, List[Affine]]:
    """Support of the negative part of D - s·C for s slightly larger than t."""
    negatives = model.negative_curves
    decomposition = zariski_decompose(model, tuple(d - t * c for d, c in zip(D, C)))
    chosen = [i for i, c in enumerate(negatives) if c.label in decomposition.negative_coeffs]
    while True:
        support = [negatives[i] for i in chosen]
        coeffs = _affine_solution(model, D, C, support)
        entering = []
        for i, curve in enumerate(negatives):
            if i in chosen:
                continue
            value = _positive_part_dot(model, D, C, support, coeffs, curve.cls)
            if value(t) == 0 and value.slope < 0:
                entering.append(i)
        if not entering:
            return support, coeffs
        chosen = sorted(chosen + entering)


def sweep(model: SurfaceModel, D, flag: FlagSpec) -> List[SweepPiece]:
    """Partition [ν, μ] into intervals on which the Zariski support of D - t·C is constant.

    Args:
        model (SurfaceModel): Surface with a finitely generated effective cone.
        D: Big divisor class.
        flag (FlagSpec): Flag whose curve C is subtracted.

    Returns:
        List[SweepPiece]: Consecutive pieces covering [ν, μ], each checked at its
        midpoint against an independent decomposition.
    """
    D = _coords(model, D)
    flag.check(model)
    C_record = model.curve(flag.curve)
    C = as_vector(C_record.cls)
    nu = nu_of(model, D, flag.curve)
    mu = mu_of(model, D, flag.curve)
    if volume(model, D) <= 0 or mu <= nu:
        raise NotBigError(f"{model.name}: divisor {D} is not big")

    pieces: List[SweepPiece] = []
    t = nu
    while t < mu:
        support, coeffs = _right_support(model, D, C, t)
        labels = tuple(c.label for c in support)
        if flag.curve in labels:
            raise FlagInNegativePartError(f"flag curve {flag.curve} enters the negative part after t = {t}")
        end = mu
        for curve in model.negative_curves:
            if curve.label in labels:
                continue
            value = _positive_part_dot(model, D, C, support, coeffs, curve.cls)
            root = value.root()
            if value.slope < 0 and root is not None and t < root < end:
                end = root
        for a in coeffs:
            root = a.root()
            if a.slope < 0 and root is not None and t < root < end:
                end = root
        flag_dot = _positive_part_dot(model, D, C, support, coeffs, C)
        piece = SweepPiece(t, end, labels, dict(zip(labels, coeffs)), flag_dot)
        _validate_piece(model, D, C, piece)
        logger.debug("sweep piece [%s, %s] support %s", t, end, labels)
        pieces.append(piece)
        t = end
    return pieces


def _validate_piece(model: SurfaceModel, D, C, piece: SweepPiece) -> None:
    middle = (piece.start + piece.end) / 2
    expected = zariski_decompose(model, tuple(d - middle * c for d, c in zip(D, C)))
    computed = {label: a(middle) for label, a in piece.coefficients.items()}
    if expected.negative_coeffs != computed:
        raise ModelInconsistencyError(
            f"{model.name}: sweep piece [{piece.start}, {piece.end}] predicts {computed} at t = {middle}, "
            f"decomposition gives {expected.negative_coeffs}"
        )


def alpha_beta(pieces: Sequence[SweepPiece], flag: FlagSpec) -> Tuple[PiecewiseLinearFn, PiecewiseLinearFn]:
    """α(t) = (N_t·C)_p and β(t) = α(t) + P_t·C, assembled piece by piece."""
    if flag.curve in flag.point:
        raise PreconditionError(f"point data refers to the flag curve {flag.curve} itself")
    if not pieces:
        raise ContractViolation("empty sweep")
    alphas, betas = [], []
    for piece in pieces:
        alpha = Affine(Rational(0), Rational(0))
        for label, a in piece.coefficients.items():
            alpha = alpha + a.scale(Rational(flag.point.get(label, 0)))
        alphas.append(alpha)
        betas.append(alpha + piece.positive_dot_flag)
    breakpoints = [pieces[0].start] + [p.end for p in pieces]
    return PiecewiseLinearFn.merged(breakpoints, alphas), PiecewiseLinearFn.merged(breakpoints, betas)


def _cross(o: Point, a: Point, b: Point) -> Rational:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _prune(points: List[Point]) -> List[Point]:
    """Drop repeated and collinear points of a closed polygon."""
    changed = True
    while changed and len(points) >= 3:
        changed = False
        for k in range(len(points)):
            prev, here, nxt = points[k - 1], points[k], points[(k + 1) % len(points)]
            if here == prev or _cross(prev, here, nxt) == 0:
                del points[k]
                changed = True
                break
    return points


def shoelace(vertices: Sequence[Point]) -> Rational:
    twice = sum(
        (vertices[k][0] * vertices[(k + 1) % len(vertices)][1] - vertices[(k + 1) % len(vertices)][0] * vertices[k][1]
         for k in range(len(vertices))),
        Rational(0),
    )
    return abs(twice) / 2


def polygon(model: SurfaceModel, D, flag: FlagSpec) -> NOBPolygon:
    """Newton-Okounkov polygon {ν ≤ t ≤ μ, α(t) ≤ s ≤ β(t)}, vertices counterclockwise from (ν, α(ν))."""
    pieces = sweep(model, D, flag)
    alpha, beta = alpha_beta(pieces, flag)
    lower = [(t, alpha(t)) for t in alpha.breakpoints]
    upper = [(t, beta(t)) for t in reversed(beta.breakpoints)]
    vertices = _prune(lower + upper)
    return NOBPolygon(
        vertices=tuple(vertices),
        alpha=alpha,
        beta=beta,
        nu=alpha.breakpoints[0],
        mu=alpha.breakpoints[-1],
        area=shoelace(vertices),
    )


def count_vertices(poly: NOBPolygon) -> int:
    return len(poly.vertices)
