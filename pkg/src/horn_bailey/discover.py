"""Discovery of the algebraic relation f(a, x, y) = 0 satisfied by the
branch of the H5 curve, from power-series solutions of

    (3xy^2 - 4xy - y^2 + y) x'^2 + (-12x^2 y + 8x^2 - 2xy + 2x) x' + 12x^3 - x^2 = 0

with x = x(y) and x' = dx/dy.  This is the numerator of the H5 mixed
coefficient with y taken as the curve parameter, so the derivative enters
squared.  Each constant term a = x(0) gives one series; the left
kernel of the matrix of y^v x^u coefficients encodes a relation for that a,
and the relations are interpolated in a.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import gmpy2

from .exact import MultiPoly, Q, Rational, RationalFunction, format_rational, symbol
from .fuchs import UPoly, upoly_gcd
from .reduce import PARAMETERIZATIONS, Parameterization
from .series import TruncatedSeries

DEFAULT_GRID = tuple((u, v) for u in range(4) for v in range(3))
DEFAULT_SAMPLES = tuple(list(range(-10, 0)) + list(range(1, 11)))
DEFAULT_ORDER = 30
DEFAULT_PIVOT = (3, 0)
DEFAULT_BOUNDS = (6, 6)


class DiscoveryError(ValueError):
    pass


# --------------------------------------------------------------------------
# dense truncated arithmetic on coefficient lists

def _mul(a: Sequence, b: Sequence, n: int) -> List[Rational]:
    out = [Q(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _deriv(a: Sequence) -> List[Rational]:
    return [i * a[i] for i in range(1, len(a))]


def _ode_residual(x: Sequence, n: int) -> List[Rational]:
    """Coefficients y^0 .. y^{n-1} of the left-hand side for x(y)."""
    x = list(x) + [Q(0)] * max(0, n + 2 - len(x))
    y = [Q(0), Q(1)]
    x1 = _deriv(x)
    xx = _mul(x, x, n)
    xy = _mul(x, y, n)
    yy = [Q(0), Q(0), Q(1)]
    # A = 3xy^2 - 4xy - y^2 + y
    A = [3 * c for c in _mul(xy, y, n)]
    A = [A[i] - 4 * (xy[i] if i < len(xy) else 0) - (yy[i] if i < 3 else 0) + (y[i] if i < 2 else 0) for i in range(n)]
    # B = -12x^2 y + 8x^2 - 2xy + 2x
    x2y = _mul(xx, y, n)
    B = [-12 * x2y[i] + 8 * xx[i] - 2 * xy[i] + 2 * x[i] for i in range(n)]
    # C = 12x^3 - x^2
    x3 = _mul(xx, x, n)
    C = [12 * x3[i] - xx[i] for i in range(n)]
    t1 = _mul(A, _mul(x1, x1, n), n)
    t2 = _mul(B, x1, n)
    return [t1[i] + t2[i] + C[i] for i in range(n)]


def ode_series_solution(x0, M: int = DEFAULT_ORDER) -> TruncatedSeries:
    """x(y) = x0 + x1 y + ... + x_M y^M solving the nonlinear equation.

    The coefficient of y^k in the residual is affine in x_{k+1}; each order
    is solved for that single unknown.
    """
    x = [Q(x0)]
    for k in range(M):
        trial = x + [Q(0)]
        base = _ode_residual(trial, k + 1)[k]
        trial[-1] = Q(1)
        mult = _ode_residual(trial, k + 1)[k] - base
        if not mult:
            raise DiscoveryError(f"singular recurrence step at order {k} (x0 = {format_rational(Q(x0))})")
        x.append(-base / mult)
    return TruncatedSeries(("y",), M, {(i,): c for i, c in enumerate(x) if c})


def ode_residual(sol: TruncatedSeries) -> List[Rational]:
    coeffs = [sol.coefficient((i,)) for i in range(sol.cap + 1)]
    return _ode_residual(coeffs, sol.cap)


# --------------------------------------------------------------------------
# exact matrices and left kernels

@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[Rational, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        entries = tuple(tuple(Q(x) for x in row) for row in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ValueError("entries do not match dimensions")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, tuple(tuple(r) for r in rows))

    def row(self, i: int) -> Tuple[Rational, ...]:
        return self.entries[i]


def monomial_matrix(sol: TruncatedSeries, grid: Sequence[Tuple[int, int]] = DEFAULT_GRID,
                    M: int = DEFAULT_ORDER) -> ExactMatrix:
    """Row (u, v) holds the coefficients of y^0 .. y^{M-1} in y^v sol^u."""
    if sol.cap < M - 1:
        raise ValueError(f"solution cap {sol.cap} too small for {M} columns")
    base = [sol.coefficient((i,)) for i in range(M)]
    powers = {0: [Q(1)] + [Q(0)] * (M - 1)}
    for u in range(1, max(u for u, _ in grid) + 1):
        powers[u] = _mul(powers[u - 1], base, M)
    rows = []
    for u, v in sorted(grid):
        p = powers[u]
        rows.append([Q(0)] * v + p[: M - v])
    return ExactMatrix.from_rows(rows)


def _primitive(vec: Sequence[Rational]) -> Tuple[int, ...]:
    den = 1
    for x in vec:
        den = lcm(den, int(x.denominator))
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gmpy2.gcd(g, x)
    if not g:
        raise ValueError("zero vector has no primitive form")
    ints = [x // int(g) for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def left_kernel(m: ExactMatrix) -> List[Tuple[int, ...]]:
    """Basis of {c : c^T m = 0}, each vector integral, primitive, with its
    first nonzero entry positive.

    Rows of [m | I] are cleared to integers and eliminated fraction-free
    (cross-multiplication followed by removal of the row content); rows whose
    left block vanishes carry the kernel in their right block.
    """
    n, k = m.rows, m.cols
    work = []
    for i in range(n):
        row = list(m.row(i)) + [Q(int(i == j)) for j in range(n)]
        den = 1
        for x in row:
            den = lcm(den, int(x.denominator))
        work.append([gmpy2.mpz(int(x * den)) for x in row])
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r]
        for i in range(n):
            if i != r and work[i][col]:
                f = work[i][col]
                row = [p[col] * a - f * b for a, b in zip(work[i], p)]
                g = 0
                for x in row:
                    g = gmpy2.gcd(g, x)
                work[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == n:
            break
    basis = []
    for i in range(r, n):
        vec = [Q(int(x)) for x in work[i][k:]]
        basis.append(_primitive(vec))
    return basis


# --------------------------------------------------------------------------
# relations

@dataclass(frozen=True)
class KernelRelation:
    """sum c_{u,v}(a) x^u y^v over a monomial grid."""

    coefficients: Tuple[Tuple[Tuple[int, int], MultiPoly], ...]

    def __post_init__(self):
        coeffs = tuple(sorted((tuple(k), MultiPoly.coerce(v)) for k, v in self.coefficients))
        if all(v.is_zero() for _, v in coeffs):
            raise ValueError("relation has no nonzero coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_dict(cls, coeffs: Mapping[Tuple[int, int], object]) -> "KernelRelation":
        return cls(tuple(coeffs.items()))

    @classmethod
    def from_polynomial(cls, f: MultiPoly) -> "KernelRelation":
        """Split a polynomial in a, x, y into its x^u y^v coefficients."""
        out: Dict[Tuple[int, int], MultiPoly] = {}
        for u, cu in f.coefficients_in("x").items():
            for v, cuv in cu.coefficients_in("y").items():
                out[(u, v)] = cuv
        return cls.from_dict(out)

    @property
    def grid(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(k for k, _ in self.coefficients)

    def coefficient(self, u: int, v: int) -> MultiPoly:
        return dict(self.coefficients).get((u, v), MultiPoly.const(0))

    def to_polynomial(self) -> MultiPoly:
        x = MultiPoly.var("x")
        y = MultiPoly.var("y")
        out = MultiPoly.const(0)
        for (u, v), c in self.coefficients:
            out = out + c * x ** u * y ** v
        return out

    def at(self, a) -> Dict[Tuple[int, int], Rational]:
        return {k: c.evaluate({"a": Q(a)}) if c.free_symbols() else c.constant_term()
                for k, c in self.coefficients}

    def __str__(self):
        return str(self.to_polynomial())


def projective_ratio(f: Mapping, g: Mapping):
    """The scalar lambda with f = lambda * g coordinate-wise, or None."""
    keys = set(f) | set(g)
    ratio = None
    for k in sorted(keys):
        fk, gk = f.get(k, 0), g.get(k, 0)
        fz = fk.is_zero() if hasattr(fk, "is_zero") else not fk
        gz = gk.is_zero() if hasattr(gk, "is_zero") else not gk
        if fz and gz:
            continue
        if fz or gz:
            return None
        if ratio is None:
            ratio = _quotient(fk, gk)
            if ratio is None:
                return None
        elif fk != _scale(gk, ratio):
            return None
    return ratio


def _quotient(f, g):
    if isinstance(f, MultiPoly):
        r = f.leading_coefficient() / g.leading_coefficient()
        return r if f == g * r else None
    return Q(f) / Q(g)


def _scale(g, r):
    return g * r


def _solve_nullspace(rows: List[List[Rational]], ncols: int) -> List[List[Rational]]:
    """Nullspace of a rational matrix by Gauss-Jordan elimination."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fcol in free:
        vec = [Q(0)] * ncols
        vec[fcol] = Q(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fcol]
        out.append(vec)
    return out


def _eval_upoly(c: Sequence[Rational], a: Rational) -> Rational:
    acc = Q(0)
    for x in reversed(c):
        acc = acc * a + x
    return acc


def rational_reconstruction(points: Sequence[Tuple[Rational, Rational]], dn: int, dd: int) -> Tuple[UPoly, UPoly]:
    """N/D through every (a, value) with deg N <= dn and deg D <= dd, taking
    the smallest denominator degree that admits a solution."""
    if len(points) < dn + dd + 2:
        raise DiscoveryError(f"need at least {dn + dd + 2} samples, got {len(points)}")
    for e in range(dd + 1):
        rows = []
        for a, val in points:
            pw = [Q(1)]
            for _ in range(max(dn, e)):
                pw.append(pw[-1] * a)
            rows.append(pw[: dn + 1] + [-val * pw[j] for j in range(e + 1)])
        null = _solve_nullspace(rows, dn + e + 2)
        for vec in null:
            N = UPoly(vec[: dn + 1])
            D = UPoly(vec[dn + 1:])
            if D.is_zero() or any(not D(a) for a, _ in points):
                continue
            return N, D
    raise DiscoveryError("degree bounds too small for the sampled values")


def _upoly_to_multipoly(p: UPoly, var: str = "a") -> MultiPoly:
    return MultiPoly((var,), {(i,): c for i, c in enumerate(p.c) if c})


def reconstruct_relation(samples: Sequence[Tuple[Rational, Sequence]], grid: Sequence[Tuple[int, int]] = DEFAULT_GRID,
                         pivot: Tuple[int, int] = DEFAULT_PIVOT,
                         bounds: Tuple[int, int] = DEFAULT_BOUNDS) -> KernelRelation:
    """Interpolate per-sample kernel vectors (ordered as ``grid``) in a.

    Vectors are scaled so the pivot entry is 1, each coordinate is
    reconstructed as a rational function of a, and the result is cleared
    of denominators to an integral primitive relation whose pivot
    coefficient has a negative leading term.
    """
    grid = list(sorted(grid))
    if pivot not in grid:
        raise DiscoveryError(f"pivot {pivot} not in grid")
    pi = grid.index(pivot)
    dn, dd = bounds
    normalised = []
    for a, vec in samples:
        if not vec[pi]:
            raise DiscoveryError(f"pivot coefficient vanishes at a = {format_rational(Q(a))}")
        normalised.append((Q(a), [Q(x) / Q(vec[pi]) for x in vec]))
    parts = []
    for i in range(len(grid)):
        parts.append(rational_reconstruction([(a, v[i]) for a, v in normalised], dn, dd))
    L = UPoly([1])
    for _, D in parts:
        g = upoly_gcd(L, D)
        L = (L * D).divmod(g)[0]
    coeffs = {}
    for key, (N, D) in zip(grid, parts):
        coeffs[key] = _upoly_to_multipoly(N * L.divmod(D)[0])
    return normalise_relation(coeffs, pivot)


def normalise_relation(coeffs: Mapping[Tuple[int, int], MultiPoly], pivot=DEFAULT_PIVOT) -> KernelRelation:
    den = 1
    for c in coeffs.values():
        for x in c.terms.values():
            den = lcm(den, int(x.denominator))
    g = 0
    for c in coeffs.values():
        for x in c.terms.values():
            g = gmpy2.gcd(g, int(x * den))
    scale = Q(den) / Q(int(g))
    piv = coeffs.get(pivot)
    if piv is not None and not piv.is_zero() and piv.leading_coefficient() > 0:
        scale = -scale
    return KernelRelation.from_dict({k: c * scale for k, c in coeffs.items() if not c.is_zero()})


def kernel_samples(samples: Iterable = DEFAULT_SAMPLES, M: int = DEFAULT_ORDER,
                   grid: Sequence[Tuple[int, int]] = DEFAULT_GRID) -> List[Tuple[Rational, List[Tuple[int, ...]]]]:
    """(a, kernel basis) for every constant term a."""
    out = []
    for a in samples:
        sol = ode_series_solution(a, M)
        out.append((Q(a), left_kernel(monomial_matrix(sol, grid, M))))
    return out


def discover_relation(samples: Iterable = DEFAULT_SAMPLES, M: int = DEFAULT_ORDER,
                      grid: Sequence[Tuple[int, int]] = DEFAULT_GRID, pivot=DEFAULT_PIVOT,
                      bounds=DEFAULT_BOUNDS) -> Tuple[KernelRelation, List[Tuple[Rational, List[Tuple[int, ...]]]]]:
    kernels = kernel_samples(samples, M, grid)
    bad = [format_rational(a) for a, basis in kernels if len(basis) != 1]
    if bad:
        raise DiscoveryError(f"kernel is not one-dimensional at a = {', '.join(bad)}")
    rel = reconstruct_relation([(a, basis[0]) for a, basis in kernels], grid, pivot, bounds)
    return rel, kernels


def verify_relation(rel: KernelRelation, P: Optional[Parameterization] = None, a_value: str = "s^2") -> bool:
    """Whether f(a, x(s,t), y(s,t)) vanishes identically after a -> a_value."""
    from .parser import parse_ratfunc

    P = P or PARAMETERIZATIONS["H5"]
    f = RationalFunction(rel.to_polynomial())
    g = f.subs({symbol("a"): parse_ratfunc(a_value), symbol("x"): P.x, symbol("y"): P.y})
    return g.is_zero()
