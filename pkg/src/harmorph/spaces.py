"""Symmetric-space descriptors and orthonormal bases of the horizontal complement.

Five configurations are supported, identified by short CLI-facing ids:

====== =================== =============== ==================
id      ambient group       stabilizer K    base map
====== =================== =============== ==================
slr-so  GL+(n, R)           SO(n)           x -> x x^t
sus-sp  U*(2n)              Sp(n)           x -> x x^*
su-so   SU(n)               SO(n)           x -> x x^t
su-sp   SU(2n)              Sp(n)           x -> x J^t x^t J
slc-su  SL(n, C)            SU(n)           x -> x x^*
====== =================== =============== ==================

For slr-so and sus-sp the bases are the hand-written appendix families
(D_k, X_kl and the five block sets).  For the compact duals the basis is
completed numerically by orthonormalizing against the stabilizer algebra;
tension and conformality sums are basis independent, so any orthonormal
basis of the complement will do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .matrices import exact_matrix
from .scalars import ComplexRational

SQRT2 = math.sqrt(2.0)

# Exact basis elements are stored as (matrix, scale_sq) with the true
# element scale * matrix, scale = sqrt(scale_sq).  Every identity checked
# on the exact backend consumes only products of two basis elements, so
# the irrational scale never needs to be materialized.
ExactBasisElement = tuple[np.ndarray, Fraction]

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# elementary matrices
# ---------------------------------------------------------------------------

def elem_E(n: int, k: int, l: int, dtype=complex) -> np.ndarray:
    """Matrix unit E_kl (1-based indices)."""
    _check_index(n, k, l)
    m = np.zeros((n, n), dtype=dtype)
    m[k - 1, l - 1] = 1
    return m


def elem_D(n: int, k: int, dtype=complex) -> np.ndarray:
    """Diagonal unit D_k = E_kk."""
    return elem_E(n, k, k, dtype)


def elem_X(n: int, k: int, l: int, dtype=complex) -> np.ndarray:
    """Symmetric unit (E_kl + E_lk) / sqrt(2), requires k < l."""
    _check_ordered(k, l)
    return (elem_E(n, k, l, dtype) + elem_E(n, l, k, dtype)) / SQRT2


def elem_Y(n: int, k: int, l: int, dtype=complex) -> np.ndarray:
    """Antisymmetric unit (E_kl - E_lk) / sqrt(2), requires k < l."""
    _check_ordered(k, l)
    return (elem_E(n, k, l, dtype) - elem_E(n, l, k, dtype)) / SQRT2


def _check_index(n: int, k: int, l: int) -> None:
    if not (1 <= k <= n and 1 <= l <= n):
        raise IndexError(f"index ({k},{l}) out of range for n={n}")


def _check_ordered(k: int, l: int) -> None:
    if not k < l:
        raise IndexError(f"X/Y units require k < l, got ({k},{l})")


def elem_X_exact(n: int, k: int, l: int) -> ExactBasisElement:
    _check_ordered(k, l)
    _check_index(n, k, l)
    m = exact_matrix([[Fraction(0)] * n for _ in range(n)])
    m[k - 1, l - 1] = Fraction(1)
    m[l - 1, k - 1] = Fraction(1)
    return m, HALF


def elem_Y_exact(n: int, k: int, l: int) -> ExactBasisElement:
    _check_ordered(k, l)
    _check_index(n, k, l)
    m = exact_matrix([[Fraction(0)] * n for _ in range(n)])
    m[k - 1, l - 1] = Fraction(1)
    m[l - 1, k - 1] = Fraction(-1)
    return m, HALF


def elem_D_exact(n: int, k: int) -> ExactBasisElement:
    _check_index(n, k, k)
    m = exact_matrix([[Fraction(0)] * n for _ in range(n)])
    m[k - 1, k - 1] = Fraction(1)
    return m, Fraction(1)


# ---------------------------------------------------------------------------
# space descriptors
# ---------------------------------------------------------------------------

TRACE_XY = "trace_xy"
RE_TRACE_XY = "re_trace_xy"
MINUS_RE_TRACE_XY = "minus_re_trace_xy"

X_XT = "x_xt"
X_XSTAR = "x_xstar"
X_JT_XT_J = "x_jt_xt_j"


def symplectic_J(n: int) -> np.ndarray:
    """The fixed 2n x 2n symplectic matrix [[0, I], [-I, 0]]."""
    z = np.zeros((n, n))
    i = np.eye(n)
    return np.block([[z, i], [-i, z]]).astype(complex)


@dataclass(frozen=True)
class SpaceSpec:
    """Descriptor of one symmetric-space configuration G/K."""

    id: str
    n: int
    ambient_dim: int
    base_map_variant: str
    form: str
    compact: bool
    stabilizer: str  # "so", "sp" or "su"

    @property
    def J(self) -> np.ndarray:
        if self.stabilizer != "sp":
            raise ValueError(f"space {self.id} carries no symplectic structure")
        return symplectic_J(self.n)

    def membership(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        return _membership(self, x, tol)

    def stabilizer_membership(self, k: np.ndarray, tol: float = 1e-10) -> bool:
        return _stabilizer_membership(self, k, tol)

    def label(self) -> str:
        return f"{self.id}:n={self.n}"


SPACE_IDS = ("slr-so", "sus-sp", "su-so", "su-sp", "slc-su")


def make_space(space_id: str, n: int) -> SpaceSpec:
    if n < 1:
        raise ValueError("rank parameter n must be positive")
    if space_id == "slr-so":
        return SpaceSpec("slr-so", n, n, X_XT, TRACE_XY, False, "so")
    if space_id == "sus-sp":
        return SpaceSpec("sus-sp", n, 2 * n, X_XSTAR, RE_TRACE_XY, False, "sp")
    if space_id == "su-so":
        return SpaceSpec("su-so", n, n, X_XT, MINUS_RE_TRACE_XY, True, "so")
    if space_id == "su-sp":
        return SpaceSpec("su-sp", n, 2 * n, X_JT_XT_J, MINUS_RE_TRACE_XY, True, "sp")
    if space_id == "slc-su":
        return SpaceSpec("slc-su", n, n, X_XSTAR, RE_TRACE_XY, False, "su")
    raise ValueError(f"unknown space id {space_id!r}; expected one of {SPACE_IDS}")


def _membership(space: SpaceSpec, x: np.ndarray, tol: float) -> bool:
    d = space.ambient_dim
    if x.shape != (d, d):
        return False
    if space.id == "slr-so":
        if np.max(np.abs(x.imag)) > tol:
            return False
        dx = np.linalg.det(x.real)
        return dx > 0
    if space.id == "sus-sp":
        J = space.J
        scale = max(1.0, float(np.linalg.norm(x)))
        if np.linalg.norm(x @ J - J @ x.conj()) > tol * scale:
            return False
        dx = np.linalg.det(x)
        return dx.real > 0 and abs(dx.imag) <= tol * max(1.0, abs(dx))
    if space.id in ("su-so", "su-sp"):
        if np.linalg.norm(x @ x.conj().T - np.eye(d)) > tol:
            return False
        return abs(np.linalg.det(x) - 1) <= tol
    if space.id == "slc-su":
        return abs(np.linalg.det(x) - 1) <= tol
    raise AssertionError(space.id)


def _stabilizer_membership(space: SpaceSpec, k: np.ndarray, tol: float) -> bool:
    d = space.ambient_dim
    if k.shape != (d, d):
        return False
    if np.linalg.norm(k @ k.conj().T - np.eye(d)) > tol:
        return False
    if abs(np.linalg.det(k) - 1) > tol:
        return False
    if space.stabilizer == "so":
        return np.max(np.abs(k.imag)) <= tol
    if space.stabilizer == "sp":
        J = space.J
        return np.linalg.norm(k @ J - J @ k.conj()) <= tol
    return True  # su


# ---------------------------------------------------------------------------
# p-bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PBasis:
    """Ordered orthonormal basis of the horizontal complement."""

    elements: tuple[np.ndarray, ...]
    form: str

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def form_inner(form: str, a: np.ndarray, b: np.ndarray) -> float:
    t = np.trace(a @ b)
    if form == TRACE_XY:
        return complex(t).real if abs(complex(t).imag) < 1e-13 else complex(t)
    if form == RE_TRACE_XY:
        return complex(t).real
    if form == MINUS_RE_TRACE_XY:
        return -complex(t).real
    raise ValueError(f"unknown form {form!r}")


def expected_basis_size(space: SpaceSpec) -> int:
    n = space.n
    if space.id == "slr-so":
        return n * (n + 1) // 2
    if space.id == "sus-sp":
        return 2 * n * n - n
    if space.id == "su-so":
        return n * (n + 1) // 2 - 1
    if space.id == "su-sp":
        return 2 * n * n - n - 1
    if space.id == "slc-su":
        return n * n - 1
    raise AssertionError(space.id)


def _traceless_diag_units(n: int) -> list[np.ndarray]:
    """Orthonormal traceless diagonal matrices under trace(XY)."""
    out = []
    for j in range(1, n):
        h = np.zeros((n, n), dtype=complex)
        for i in range(j):
            h[i, i] = 1.0
        h[j, j] = -float(j)
        out.append(h / math.sqrt(j * (j + 1)))
    return out


def _quat_block(top_left, bottom_right, top_right=None, bottom_left=None) -> np.ndarray:
    n = top_left.shape[0] if top_left is not None else top_right.shape[0]
    z = np.zeros((n, n), dtype=complex)
    tl = top_left if top_left is not None else z
    br = bottom_right if bottom_right is not None else z
    tr = top_right if top_right is not None else z
    bl = bottom_left if bottom_left is not None else z
    return np.block([[tl, tr], [bl, br]])


def _sus_sp_basis(n: int) -> list[np.ndarray]:
    """The five printed block families for su*(2n) = sp(n) + p."""
    out = []
    for k in range(1, n + 1):
        d = elem_D(n, k)
        out.append(_quat_block(d, d) / SQRT2)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            x = elem_X(n, k, l)
            out.append(_quat_block(x, x) / SQRT2)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            y = elem_Y(n, k, l)
            out.append(_quat_block(1j * y, -1j * y) / SQRT2)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            y = elem_Y(n, k, l)
            out.append(_quat_block(None, None, y, -y) / SQRT2)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            y = elem_Y(n, k, l)
            out.append(_quat_block(None, None, 1j * y, 1j * y) / SQRT2)
    return out


def stabilizer_algebra(space: SpaceSpec) -> list[np.ndarray]:
    """Generators (orthogonal, not normalized) of the stabilizer Lie algebra."""
    n = space.n
    if space.stabilizer == "so":
        return [elem_Y(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
    if space.stabilizer == "su":
        gens = [elem_Y(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
        gens += [1j * elem_X(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
        gens += [1j * h for h in _traceless_diag_units(n)]
        return gens
    # sp(n): alpha anti-Hermitian, beta symmetric
    gens = []
    alphas = [1j * elem_D(n, k) for k in range(1, n + 1)]
    alphas += [elem_Y(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
    alphas += [1j * elem_X(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
    for a in alphas:
        gens.append(_quat_block(a, a.conj()))
    betas = [elem_D(n, k) for k in range(1, n + 1)]
    betas += [elem_X(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
    betas += [1j * b for b in betas[: n + n * (n - 1) // 2]]
    for b in betas:
        gens.append(_quat_block(None, None, b, -b.conj()))
    return gens


def _su_ambient_basis(d: int) -> list[np.ndarray]:
    """A spanning basis of su(d) (anti-Hermitian traceless)."""
    basis = [elem_Y(d, k, l) for k in range(1, d + 1) for l in range(k + 1, d + 1)]
    basis += [1j * elem_X(d, k, l) for k in range(1, d + 1) for l in range(k + 1, d + 1)]
    basis += [1j * h for h in _traceless_diag_units(d)]
    return basis


def _flatten_real(m: np.ndarray) -> np.ndarray:
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def _orthonormal_complement(ambient: list[np.ndarray], sub: list[np.ndarray],
                            dim: int, shape: tuple[int, int]) -> list[np.ndarray]:
    """Orthonormal basis of the complement of span(sub) inside span(ambient).

    Works in the flattened real coordinates, where the Frobenius real inner
    product coincides with -Re trace(XY) on anti-Hermitian matrices.
    """
    ka = np.array([_flatten_real(m) for m in sub]).T
    q_sub, _ = np.linalg.qr(ka)
    va = np.array([_flatten_real(m) for m in ambient]).T
    proj = va - q_sub @ (q_sub.T @ va)
    u, s, _ = np.linalg.svd(proj, full_matrices=False)
    cols = [u[:, i] for i in range(len(s)) if s[i] > 1e-9]
    if len(cols) != dim:
        raise RuntimeError(f"complement dimension {len(cols)} != expected {dim}")
    d = shape[0]
    out = []
    for v in cols:
        out.append((v[: d * d] + 1j * v[d * d:]).reshape(shape))
    return out


@lru_cache(maxsize=None)
def _p_basis_cached(space_id: str, n: int) -> PBasis:
    space = make_space(space_id, n)
    if space.id == "slr-so":
        els = [elem_D(n, k) for k in range(1, n + 1)]
        els += [elem_X(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
    elif space.id == "sus-sp":
        els = _sus_sp_basis(n)
    elif space.id == "su-so":
        els = [1j * elem_X(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
        els += [1j * h for h in _traceless_diag_units(n)]
    elif space.id == "su-sp":
        d = 2 * n
        els = _orthonormal_complement(_su_ambient_basis(d), stabilizer_algebra(space),
                                      expected_basis_size(space), (d, d))
    elif space.id == "slc-su":
        els = [elem_X(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
        els += [1j * elem_Y(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
        els += _traceless_diag_units(n)
    else:
        raise AssertionError(space.id)
    for m in els:
        m.setflags(write=False)
    return PBasis(tuple(els), space.form)


def p_basis(space: SpaceSpec) -> PBasis:
    return _p_basis_cached(space.id, space.n)


# ---------------------------------------------------------------------------
# exact appendix bases (slr-so, sus-sp only)
# ---------------------------------------------------------------------------

def p_basis_exact(space: SpaceSpec) -> list[ExactBasisElement]:
    """Appendix bases as (rational matrix, scale^2) pairs."""
    n = space.n
    if space.id == "slr-so":
        els = [elem_D_exact(n, k) for k in range(1, n + 1)]
        els += [elem_X_exact(n, k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
        return els
    if space.id == "sus-sp":
        return _sus_sp_basis_exact(n)
    raise ValueError(f"no hand-written exact basis for space {space.id}")


def _cq(re=0, im=0) -> ComplexRational:
    return ComplexRational(re, im)


def _exact_quat_block(n, tl=None, br=None, tr=None, bl=None) -> np.ndarray:
    out = np.empty((2 * n, 2 * n), dtype=object)
    out[:] = _cq(0)
    for block, (r0, c0) in ((tl, (0, 0)), (tr, (0, n)), (bl, (n, 0)), (br, (n, n))):
        if block is not None:
            out[r0:r0 + n, c0:c0 + n] = block
    return out


def _exact_sym(n, k, l, im=False):
    """(E_kl + E_lk) over ComplexRational, optionally times i; no normalization."""
    m = np.empty((n, n), dtype=object)
    m[:] = _cq(0)
    one = _cq(0, 1) if im else _cq(1)
    m[k - 1, l - 1] = one
    m[l - 1, k - 1] = one
    return m


def _exact_skew(n, k, l, im=False):
    m = np.empty((n, n), dtype=object)
    m[:] = _cq(0)
    one = _cq(0, 1) if im else _cq(1)
    m[k - 1, l - 1] = one
    m[l - 1, k - 1] = -one
    return m


def _exact_diag_unit(n, k):
    m = np.empty((n, n), dtype=object)
    m[:] = _cq(0)
    m[k - 1, k - 1] = _cq(1)
    return m


def _sus_sp_basis_exact(n: int) -> list[ExactBasisElement]:
    els: list[ExactBasisElement] = []
    for k in range(1, n + 1):
        d = _exact_diag_unit(n, k)
        els.append((_exact_quat_block(n, tl=d, br=d), HALF))
    pairs = [(k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]
    for k, l in pairs:
        x = _exact_sym(n, k, l)
        els.append((_exact_quat_block(n, tl=x, br=x), Fraction(1, 4)))
    for k, l in pairs:
        iy = _exact_skew(n, k, l, im=True)
        els.append((_exact_quat_block(n, tl=iy, br=-iy), Fraction(1, 4)))
    for k, l in pairs:
        y = _exact_skew(n, k, l)
        els.append((_exact_quat_block(n, tr=y, bl=-y), Fraction(1, 4)))
    for k, l in pairs:
        iy = _exact_skew(n, k, l, im=True)
        els.append((_exact_quat_block(n, tr=iy, bl=iy), Fraction(1, 4)))
    return els


def symplectic_J_exact(n: int) -> np.ndarray:
    eye = _exact_diag_unit(n, 1)
    eye[:] = _cq(0)
    for i in range(n):
        eye[i, i] = _cq(1)
    return _exact_quat_block(n, tr=eye, bl=-eye)


# ---------------------------------------------------------------------------
# Casimir-style p-sum
# ---------------------------------------------------------------------------

def casimir_p_sum(space: SpaceSpec):
    """Sum of Z^2 over the p-basis.

    Exact (object dtype) for slr-so and sus-sp, where it is a rational
    multiple of the identity; float for the numerically completed bases.
    """
    if space.id in ("slr-so", "sus-sp"):
        total = None
        for m, scale_sq in p_basis_exact(space):
            sq = scale_sq * (m @ m)
            total = sq if total is None else total + sq
        return total
    total = np.zeros((space.ambient_dim, space.ambient_dim), dtype=complex)
    for z in p_basis(space):
        total += z @ z
    return total
