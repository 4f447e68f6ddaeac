"""The candidate harmonic-morphism constructions, as expressions plus domains.

Each construction pairs an expression over the base-map entries with the
space it lives on, a domain predicate with a numerical margin, and the
invariances it is expected to satisfy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .jets import (BRANCH_CUT_EPS, Const, Entry, Expr, ScaleByI, Sqrt,
                   base_map_value, eval_value)
from .spaces import SpaceSpec, make_space

DEFAULT_MARGIN = 1e-6

STABILIZER_RIGHT = "stabilizer-right"
POSITIVE_SCALE = "positive-scale"


@dataclass(frozen=True)
class Morphism:
    """A candidate complex-valued map on the ambient group."""

    expr: Expr
    space: SpaceSpec
    label: str
    domain: Callable[[np.ndarray], bool]
    invariances: tuple[str, ...]

    def value(self, x: np.ndarray) -> complex:
        return eval_value(self.expr, self.space, x)


def _entry(k, l):
    return Entry(k, l)


def _member_domain(space: SpaceSpec) -> Callable[[np.ndarray], bool]:
    return lambda x: space.membership(x, 1e-8)


def _check_kl(n: int, k: int, l: int) -> None:
    if not (1 <= k <= n and 1 <= l <= n):
        raise IndexError(f"indices ({k},{l}) out of range for n={n}")
    if k == l:
        raise ValueError("the construction requires k != l")


def real_morphism(n: int, k: int, l: int) -> Morphism:
    """(phi_kl + i psi_kl) / phi_ll on GL+(n, R), globally defined."""
    _check_kl(n, k, l)
    space = make_space("slr-so", n)
    psi = Sqrt(_entry(k, k) * _entry(l, l) - _entry(k, l) ** 2)
    expr = (_entry(k, l) + ScaleByI(psi)) / _entry(l, l)
    return Morphism(expr, space, f"slr-so:n={n}:kl={k}{l}", _member_domain(space),
                    (STABILIZER_RIGHT, POSITIVE_SCALE))


def quat_family(n: int, l: int) -> list[Morphism]:
    """The family {phi_kl / phi_ll | k != l} on U*(2n), globally defined."""
    if not 1 <= l <= n:
        raise IndexError(f"l={l} out of range for n={n}")
    space = make_space("sus-sp", n)
    out = []
    for k in range(1, 2 * n + 1):
        if k == l:
            continue
        expr = _entry(k, l) / _entry(l, l)
        out.append(Morphism(expr, space, f"sus-sp:n={n}:l={l}:k={k}",
                            _member_domain(space), (STABILIZER_RIGHT, POSITIVE_SCALE)))
    return out


def dual_real_domain_detail(space: SpaceSpec, k: int, l: int, x: np.ndarray,
                            margin: float = DEFAULT_MARGIN) -> tuple[bool, bool]:
    """(stated-condition ok, branch-cut guard ok) at x.

    The stated condition is phi_ll != 0 and w = phi_kk phi_ll - phi_kl^2
    off the imaginary axis; the guard additionally keeps w away from the
    principal branch cut.  The two can disagree; callers may count such
    points.
    """
    phi = base_map_value(space, x, check=False)
    pll = complex(phi[l - 1, l - 1])
    w = complex(phi[k - 1, k - 1]) * pll - complex(phi[k - 1, l - 1]) ** 2
    stated = abs(pll) > margin and abs(w.real) > margin * abs(w)
    cut_ok = not (w.real <= 0 and abs(w.imag) <= BRANCH_CUT_EPS * abs(w)) and w != 0
    return stated, cut_ok


def dual_real_morphism(n: int, k: int, l: int, margin: float = DEFAULT_MARGIN) -> Morphism:
    """(phi*_kl + i psi*_kl) / phi*_ll on SU(n), defined off the stated bad set."""
    _check_kl(n, k, l)
    space = make_space("su-so", n)
    psi = Sqrt(_entry(k, k) * _entry(l, l) - _entry(k, l) ** 2)
    expr = (_entry(k, l) + ScaleByI(psi)) / _entry(l, l)

    def domain(x: np.ndarray) -> bool:
        if not space.membership(x, 1e-8):
            return False
        stated, cut_ok = dual_real_domain_detail(space, k, l, x, margin)
        return stated and cut_ok

    return Morphism(expr, space, f"su-so:n={n}:kl={k}{l}", domain, (STABILIZER_RIGHT,))


def dual_quat_family(n: int, l: int, margin: float = DEFAULT_MARGIN) -> list[Morphism]:
    """The family {phi*_kl / phi*_ll | k != l} on SU(2n), defined where phi*_ll != 0."""
    if not 1 <= l <= n:
        raise IndexError(f"l={l} out of range for n={n}")
    space = make_space("su-sp", n)

    def domain(x: np.ndarray) -> bool:
        if not space.membership(x, 1e-8):
            return False
        phi = base_map_value(space, x, check=False)
        return abs(complex(phi[l - 1, l - 1])) > margin

    out = []
    for k in range(1, 2 * n + 1):
        if k == l:
            continue
        expr = _entry(k, l) / _entry(l, l)
        out.append(Morphism(expr, space, f"su-sp:n={n}:l={l}:k={k}", domain,
                            (STABILIZER_RIGHT,)))
    return out


# ---------------------------------------------------------------------------
# holomorphic composition
# ---------------------------------------------------------------------------

MAX_COMPOSE_DEGREE = 6


def holomorphic_compose(coeffs: Mapping[tuple[int, ...], complex],
                        family: Sequence[Morphism],
                        label: str | None = None) -> Morphism:
    """Polynomial F(f_1, ..., f_m) of the family members.

    ``coeffs`` maps exponent tuples (one exponent per member) to complex
    coefficients; total degree at most 6.
    """
    if not family:
        raise ValueError("empty family")
    space = family[0].space
    for m in family[1:]:
        if m.space.id != space.id or m.space.n != space.n:
            raise ValueError("family members live on different spaces")
    expr: Expr = Const(0.0)
    for exps, c in sorted(coeffs.items()):
        if len(exps) != len(family):
            raise ValueError(f"exponent tuple {exps} does not match family size {len(family)}")
        if sum(exps) > MAX_COMPOSE_DEGREE:
            raise ValueError(f"total degree {sum(exps)} exceeds {MAX_COMPOSE_DEGREE}")
        term: Expr = Const(complex(c))
        for f, e in zip(family, exps):
            if e > 0:
                term = term * f.expr ** e
        expr = expr + term

    domains = [m.domain for m in family]

    def domain(x: np.ndarray) -> bool:
        return all(d(x) for d in domains)

    shared = tuple(inv for inv in family[0].invariances
                   if all(inv in m.invariances for m in family))
    if label is None:
        label = f"{space.id}:n={space.n}:compose[{len(family)}]"
    return Morphism(expr, space, label, domain, shared)


# ---------------------------------------------------------------------------
# type IV big-cell coordinates on SL(n, C)
# ---------------------------------------------------------------------------

def _expr_det(entries: list[list[Expr]]) -> Expr:
    """Determinant of a small matrix of expression nodes, by cofactor expansion."""
    m = len(entries)
    if m == 1:
        return entries[0][0]
    total: Expr | None = None
    for j in range(m):
        sub = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = entries[0][j] * _expr_det(sub)
        if j % 2 == 1:
            term = Const(0.0) - term
        total = term if total is None else total + term
    return total


def typeIV_bigcell_morphism(n: int, i: int, j: int) -> Morphism:
    """Lower-unipotent Gauss coordinate L(g g*)_ij on SL(n, C), i > j.

    g g* is Hermitian positive definite, so all leading principal minors
    are real positive and the Gauss factor exists everywhere; the entry is
    the classical minor ratio
    det(rows 1..j-1, i; cols 1..j) / det(rows 1..j; cols 1..j).
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    if not (1 <= j < i <= n):
        raise ValueError(f"need 1 <= j < i <= n, got (i,j)=({i},{j})")
    space = make_space("slc-su", n)
    rows = list(range(1, j)) + [i]
    cols = list(range(1, j + 1))
    num = _expr_det([[Entry(r, c) for c in cols] for r in rows])
    den = _expr_det([[Entry(r, c) for c in cols] for r in range(1, j + 1)])
    expr = num / den
    return Morphism(expr, space, f"slc-su:n={n}:L{i}{j}", _member_domain(space),
                    (STABILIZER_RIGHT,))
