"""Interface hopping profiles and Bloch-reduced chain Hamiltonians.

After the Bloch reduction along the interface, each quasi-momentum k in
[-pi, pi) yields a one-dimensional chain of cells indexed by n, six sites per
cell.  The chain is truncated to n in [-N, N] with open ends; couplings that
would leave the window are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .lattice import InterfaceKind

__all__ = [
    "HoppingProfile",
    "CoefficientRow",
    "BlochOperator",
    "coeffs_type1",
    "coeffs_type2",
    "bloch_h1",
    "bloch_h2",
    "h1_first_order",
    "h2_first_order",
    "apply_T",
    "apply_V",
    "apply_R",
    "chain_index",
    "chain_apply",
    "chain_apply_first_order",
]


@dataclass(frozen=True)
class HoppingProfile:
    """The five physical parameters of an interface junction.

    b_plus/b_minus are the intracell hoppings of the two half-lattices,
    delta_plus/delta_minus detune their intercell hoppings to b + delta, and
    c couples bonds that cross the interface.  All bond weights must stay
    strictly positive.
    """

    b_plus: float
    b_minus: float
    delta_plus: float
    delta_minus: float
    c: float

    def __post_init__(self):
        if not (self.b_plus > 0 and self.b_minus > 0):
            raise ValueError("intracell hoppings must be positive")
        if self.c <= 0:
            raise ValueError("interface hopping c must be positive")
        if self.b_plus + self.delta_plus <= 0 or self.b_minus + self.delta_minus <= 0:
            raise ValueError("intercell hoppings b + delta must be positive")

    def with_c(self, c: float) -> "HoppingProfile":
        return replace(self, c=c)


@dataclass(frozen=True)
class CoefficientRow:
    """The four bond weights (a_n, b_n, c_n, d_n) entering cell row n."""

    a: float
    b: float
    c: float
    d: float


def _a_type1(p: HoppingProfile, n: int) -> float:
    if n >= 1:
        return p.b_plus + p.delta_plus
    if n == 0:
        return p.c
    return p.b_minus + p.delta_minus


def coeffs_type1(profile: HoppingProfile, n: int) -> CoefficientRow:
    """Type-I coefficient row; the c-column satisfies c_n = a_{n+1}."""
    b = profile.b_plus if n >= 0 else profile.b_minus
    d = profile.b_plus + profile.delta_plus if n >= 0 else profile.b_minus + profile.delta_minus
    return CoefficientRow(a=_a_type1(profile, n), b=b, c=_a_type1(profile, n + 1), d=d)


def _a_type2(p: HoppingProfile, n: int) -> float:
    if n >= 0:
        return p.b_plus + p.delta_plus
    if n == -1:
        return p.c
    return p.b_minus + p.delta_minus


def coeffs_type2(profile: HoppingProfile, n: int) -> CoefficientRow:
    """Type-II coefficient row; here c_n = a_n and the d-column has two
    interface rows (n = -1, -2)."""
    b = profile.b_plus if n >= 0 else profile.b_minus
    if n >= 0:
        d = profile.b_plus + profile.delta_plus
    elif n in (-1, -2):
        d = profile.c
    else:
        d = profile.b_minus + profile.delta_minus
    return CoefficientRow(a=_a_type2(profile, n), b=b, c=_a_type2(profile, n), d=d)


def _rows(kind: InterfaceKind, profile: HoppingProfile, lo: int, hi: int):
    f = coeffs_type1 if kind is InterfaceKind.TYPE_I else coeffs_type2
    return {n: f(profile, n) for n in range(lo - 4, hi + 5)}


@dataclass(frozen=True)
class BlochOperator:
    """A truncated interface Hamiltonian at fixed quasi-momentum.

    ``matrix`` is dense Hermitian of dimension 6*(2*half_width + 1); cell n,
    sublattice j map to flat index ``chain_index(n, j, half_width)``.
    """

    kind: InterfaceKind
    profile: HoppingProfile
    k: float
    half_width: int
    matrix: np.ndarray

    @property
    def n_values(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    def index(self, n: int, j: int) -> int:
        return chain_index(n, j, self.half_width)


def chain_index(n: int, j: int, half_width: int) -> int:
    """Flat index of site (j, n) on the chain n in [-N, N], j in 1..6."""
    return (n + half_width) * 6 + (j - 1)


def _h1_terms(k: float, rows, n: int):
    """Row contributions (j, j', n', weight) of the type-I operator at cell n."""
    r = rows[n]
    rm = rows[n - 1]
    eik = np.exp(1j * k)
    emk = np.exp(-1j * k)
    return [
        (1, 4, n, -r.b), (1, 5, n, -r.b), (1, 6, n - 1, -rm.c * emk),
        (2, 4, n, -r.b), (2, 5, n, -r.d * eik), (2, 6, n, -r.b),
        (3, 4, n + 1, -r.c), (3, 5, n, -r.b), (3, 6, n, -r.b),
        (4, 1, n, -r.b), (4, 2, n, -r.b), (4, 3, n - 1, -rm.c),
        (5, 1, n, -r.b), (5, 2, n, -r.d * emk), (5, 3, n, -r.b),
        (6, 1, n + 1, -r.c * eik), (6, 2, n, -r.b), (6, 3, n, -r.b),
    ]


def _h2_terms(k: float, rows, n: int):
    """Row contributions of the type-II operator at cell n (has n+-2 bonds)."""
    r = rows[n]
    rm1, rm2 = rows[n - 1], rows[n - 2]
    eik = np.exp(1j * k)
    emk = np.exp(-1j * k)
    return [
        (1, 4, n, -r.b), (1, 5, n, -r.b), (1, 6, n + 1, -r.c * emk),
        (2, 4, n, -r.b), (2, 5, n - 2, -rm2.d * eik), (2, 6, n, -r.b),
        (3, 4, n + 1, -r.c), (3, 5, n, -r.b), (3, 6, n, -r.b),
        (4, 1, n, -r.b), (4, 2, n, -r.b), (4, 3, n - 1, -rm1.c),
        (5, 1, n, -r.b), (5, 2, n + 2, -r.d * emk), (5, 3, n, -r.b),
        (6, 1, n - 1, -rm1.c * eik), (6, 2, n, -r.b), (6, 3, n, -r.b),
    ]


def _build(kind: InterfaceKind, profile: HoppingProfile, k: float, N: int) -> BlochOperator:
    rows = _rows(kind, profile, -N, N)
    terms = _h1_terms if kind is InterfaceKind.TYPE_I else _h2_terms
    dim = 6 * (2 * N + 1)
    H = np.zeros((dim, dim), dtype=complex)
    for n in range(-N, N + 1):
        for j, j2, n2, w in terms(k, rows, n):
            if -N <= n2 <= N:
                H[chain_index(n, j, N), chain_index(n2, j2, N)] = w
    return BlochOperator(kind=kind, profile=profile, k=k, half_width=N, matrix=H)


def bloch_h1(profile: HoppingProfile, k: float, N: int) -> BlochOperator:
    """Type-I interface Hamiltonian on 2N+1 cells; N >= 2."""
    if N < 2:
        raise ValueError("type-I supercell needs N >= 2 to contain the interface rows")
    return _build(InterfaceKind.TYPE_I, profile, k, N)


def bloch_h2(profile: HoppingProfile, k: float, N: int) -> BlochOperator:
    """Type-II interface Hamiltonian on 2N+1 cells; N >= 4 (n+-2 couplings)."""
    if N < 4:
        raise ValueError("type-II supercell needs N >= 4 for the n+-2 couplings")
    return _build(InterfaceKind.TYPE_II, profile, k, N)


def _h1_first_order_terms(rows, n: int):
    r, rm = rows[n], rows[n - 1]
    return [
        (1, 6, n - 1, 1j * rm.c),
        (2, 5, n, -1j * r.d),
        (5, 2, n, 1j * r.d),
        (6, 1, n + 1, -1j * r.c),
    ]


def _h2_first_order_terms(rows, n: int):
    r, rm1, rm2 = rows[n], rows[n - 1], rows[n - 2]
    return [
        (1, 6, n + 1, 1j * r.c),
        (2, 5, n - 2, -1j * rm2.d),
        (5, 2, n + 2, 1j * r.d),
        (6, 1, n - 1, -1j * rm1.c),
    ]


def _build_first_order(kind: InterfaceKind, profile: HoppingProfile, N: int) -> np.ndarray:
    rows = _rows(kind, profile, -N, N)
    terms = _h1_first_order_terms if kind is InterfaceKind.TYPE_I else _h2_first_order_terms
    dim = 6 * (2 * N + 1)
    H1 = np.zeros((dim, dim), dtype=complex)
    for n in range(-N, N + 1):
        for j, j2, n2, w in terms(rows, n):
            if -N <= n2 <= N:
                H1[chain_index(n, j, N), chain_index(n2, j2, N)] = w
    return H1


def h1_first_order(profile: HoppingProfile, N: int) -> np.ndarray:
    """dH_I/dk at k = 0 (Hermitian; rows 3 and 4 vanish identically)."""
    if N < 2:
        raise ValueError("need N >= 2")
    return _build_first_order(InterfaceKind.TYPE_I, profile, N)


def h2_first_order(profile: HoppingProfile, N: int) -> np.ndarray:
    """dH_II/dk at k = 0 (Hermitian; rows 3 and 4 vanish identically)."""
    if N < 4:
        raise ValueError("need N >= 4")
    return _build_first_order(InterfaceKind.TYPE_II, profile, N)


# ---------------------------------------------------------------------------
# Symmetry operators.  T and R are antilinear (conjugation enters), so they
# are exposed as explicit actions rather than plain matrices.
# ---------------------------------------------------------------------------

def _as_cells(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state)
    if state.size % 6:
        raise ValueError("state length must be a multiple of 6")
    return state.reshape(-1, 6)


def apply_T(k: float, state: np.ndarray) -> np.ndarray:
    """Antiunitary sublattice swap: (Tu)(n) = exp(-i n k) * swap * conj(u(n))."""
    cells = _as_cells(state)
    N = (cells.shape[0] - 1) // 2
    n = np.arange(-N, N + 1)
    out = np.conj(cells)[:, [3, 4, 5, 0, 1, 2]]
    return (np.exp(-1j * n * k)[:, None] * out).reshape(-1)


def apply_V(state: np.ndarray) -> np.ndarray:
    """Chiral sign flip on the (4,5,6) sublattice block."""
    cells = _as_cells(state).copy()
    cells[:, 3:] *= -1.0
    return cells.reshape(-1)


def apply_R(k: float, state: np.ndarray) -> np.ndarray:
    """Antiunitary in-block reversal: (Rw)(n) = exp(+i n k) * rev * conj(w(n))
    with rev swapping 1<->3 and 4<->6."""
    cells = _as_cells(state)
    N = (cells.shape[0] - 1) // 2
    n = np.arange(-N, N + 1)
    out = np.conj(cells)[:, [2, 1, 0, 5, 4, 3]]
    return (np.exp(1j * n * k)[:, None] * out).reshape(-1)


# ---------------------------------------------------------------------------
# Matrix-free application of H(k) and dH/dk to amplitude maps.  Used by the
# zero-mode construction, whose support can exceed comfortable dense sizes.
# ---------------------------------------------------------------------------

def _apply_terms(terms_of_n, amps: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
    out: dict[int, np.ndarray] = {}
    lo, hi = min(amps), max(amps)
    for n in range(lo - 2, hi + 3):
        acc = np.zeros(6, dtype=complex)
        for j, j2, n2, w in terms_of_n(n):
            if n2 in amps:
                acc[j - 1] += w * amps[n2][j2 - 1]
        if np.any(acc):
            out[n] = acc
    return out


def chain_apply(kind: InterfaceKind, profile: HoppingProfile, k: float,
                amps: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
    """Apply the infinite-chain H(k) to a finitely supported amplitude map."""
    rows = _rows(kind, profile, min(amps), max(amps))
    terms = _h1_terms if kind is InterfaceKind.TYPE_I else _h2_terms
    return _apply_terms(lambda n: terms(k, rows, n), amps)


def chain_apply_first_order(kind: InterfaceKind, profile: HoppingProfile,
                            amps: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
    """Apply dH/dk (at k = 0) to a finitely supported amplitude map."""
    rows = _rows(kind, profile, min(amps), max(amps))
    terms = _h1_first_order_terms if kind is InterfaceKind.TYPE_I else _h2_first_order_terms
    return _apply_terms(lambda n: terms(rows, n), amps)
