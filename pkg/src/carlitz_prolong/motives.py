"""t-motives, dual t-motives and t-modules by their action matrices, and their prolongations."""
from __future__ import annotations

from dataclasses import dataclass

from .base_arith import FieldParams, binom_signed_mod_p
from .errors import ShapeMismatch
from .laurent_u import LaurentU
from .rho_map import BlockMat, residual_report, rho_mat
from .special_fn import SpecialFnConfig, omega_big_power
from .t_series import TSeries


@dataclass(frozen=True, eq=False)
class MotiveDesc:
    """tau(e) = e * theta."""

    rank: int
    theta: BlockMat
    ell: int | None = None

    def __post_init__(self):
        if self.theta.size != self.rank:
            raise ShapeMismatch("theta must be rank x rank")


@dataclass(frozen=True, eq=False)
class DualMotiveDesc:
    """sigma(e) = e * theta_tilde."""

    rank: int
    theta_tilde: BlockMat
    ell: int | None = None

    def __post_init__(self):
        if self.theta_tilde.size != self.rank:
            raise ShapeMismatch("theta_tilde must be rank x rank")


@dataclass(frozen=True, eq=False)
class TModuleDesc:
    """Phi_t = A_0 + A_1 tau + ... + A_s tau^s with constant d x d matrices."""

    dim: int
    A: tuple[BlockMat, ...]

    def __post_init__(self):
        if not self.A or any(a.size != self.dim for a in self.A):
            raise ShapeMismatch("every A_i must be dim x dim")
        if not is_nilpotent_shift(self.A[0]):
            raise ValueError("A_0 - theta must be nilpotent")

    @property
    def field(self) -> FieldParams:
        return self.A[0].field


@dataclass(frozen=True, eq=False)
class Trivialization:
    """Upsilon (tau side: theta * Upsilon^tau = Upsilon) or Psi (sigma side: Psi * theta~ = Psi^sigma)."""

    matrix: BlockMat
    flavor: str

    def __post_init__(self):
        if self.flavor not in ("tau", "sigma"):
            raise ValueError("flavor is 'tau' or 'sigma'")


def is_nilpotent_shift(A0: BlockMat) -> bool:
    """(A_0 - theta)^d vanishes exactly."""
    F = A0.field
    d = A0.size
    N = A0 - BlockMat.scalar(LaurentU.theta(F), d)
    return (N**d).is_zero()


# -- prolongation -----------------------------------------------------------
def prolong_motive(M: MotiveDesc, k: int) -> MotiveDesc:
    ell = None if M.ell is None else M.ell * (k + 1)
    return MotiveDesc(M.rank * (k + 1), rho_mat(M.theta, k), ell)


def prolong_dual(M: DualMotiveDesc, k: int) -> DualMotiveDesc:
    ell = None if M.ell is None else M.ell * (k + 1)
    return DualMotiveDesc(M.rank * (k + 1), rho_mat(M.theta_tilde, k), ell)


def _block_bidiagonal(diag: BlockMat, off: BlockMat, k: int, below: bool) -> BlockMat:
    zero = BlockMat.zeros(diag.field, diag.size, LaurentU)
    blocks = []
    for i in range(k + 1):
        row = []
        for j in range(k + 1):
            if i == j:
                row.append(diag)
            elif (below and i == j + 1) or (not below and j == i + 1):
                row.append(off)
            else:
                row.append(zero)
        blocks.append(row)
    return BlockMat.from_blocks(blocks)


def prolong_tmodule(E: TModuleDesc, k: int) -> TModuleDesc:
    """A_0 on the block diagonal with -1 below it; the other A_i block-diagonal."""
    F, d = E.field, E.dim
    minus_one = -BlockMat.identity(F, d, LaurentU)
    zero = BlockMat.zeros(F, d, LaurentU)
    A0 = _block_bidiagonal(E.A[0], minus_one, k, below=True)
    rest = [_block_bidiagonal(a, zero, k, below=False) for a in E.A[1:]]
    return TModuleDesc(d * (k + 1), (A0, *rest))


def dual_prolonged_action(E: TModuleDesc, k: int) -> tuple[BlockMat, ...]:
    """t-action on the prolonged motive basis: A_i^T blocks, -1 on the block superdiagonal."""
    F, d = E.field, E.dim
    minus_one = -BlockMat.identity(F, d, LaurentU)
    zero = BlockMat.zeros(F, d, LaurentU)
    first = _block_bidiagonal(E.A[0].transpose(), minus_one, k, below=False)
    rest = [_block_bidiagonal(a.transpose(), zero, k, below=False) for a in E.A[1:]]
    return (first, *rest)


def transpose_duality_check(E: TModuleDesc, k: int) -> bool:
    P = prolong_tmodule(E, k)
    return all(a.transpose() == b for a, b in zip(P.A, dual_prolonged_action(E, k)))


# -- trivializations --------------------------------------------------------
def verify_trivialization(M: MotiveDesc | DualMotiveDesc, T: Trivialization) -> dict:
    """Residual of theta*Upsilon^tau - Upsilon, or Psi*theta~ - Psi^sigma."""
    if isinstance(M, MotiveDesc):
        if T.flavor != "tau" or T.matrix.size != M.rank:
            raise ShapeMismatch("a t-motive needs a tau-side trivialization of its rank")
        R = M.theta @ T.matrix.twist(1) - T.matrix
    elif isinstance(M, DualMotiveDesc):
        if T.flavor != "sigma" or T.matrix.size != M.rank:
            raise ShapeMismatch("a dual t-motive needs a sigma-side trivialization of its rank")
        R = T.matrix @ M.theta_tilde - T.matrix.twist(-1)
    else:
        raise TypeError("expected a motive descriptor")
    return residual_report(R)


def prolong_trivialization(T: Trivialization, k: int) -> Trivialization:
    return Trivialization(rho_mat(T.matrix, k), T.flavor)


# -- purity -----------------------------------------------------------------
def _twisted_hyperderivative(f: TSeries, u: int, n: int) -> tuple[int, TSeries]:
    """t^-u d^n(t^u f) for f a series in s = 1/t; returns (offset, g) meaning s^offset * g(s)."""
    p = f.field.p
    # t^u f = sum_j x_j s^(j-u) ; d^n s^e = C(-e, n) s^(e+n)
    offset = -u
    coeffs = []
    for j in range(f.tprec):
        c = binom_signed_mod_p(-(offset + j), n, p)
        coeffs.append(f.coeff(j) * c)
    g = TSeries.from_coeffs(f.field, coeffs, kind=f.kind,
                            tail=None if f.is_polynomial else (float("-inf"), 0.0))
    return offset + n + u, g


def purity_prolong_check(A: BlockMat, u: int, v: int, k: int) -> dict:
    """Blocks t^-u d^n(t^u A) must lie in K[[1/t]], and the assembled matrix must be invertible there.

    Entries of ``A`` are series in s = 1/t.
    """
    if v < 1:
        raise ValueError("v must be positive")
    r = A.size
    F = A.field
    min_val = float("inf")
    blocks = []
    for n in range(k + 1):
        rows = []
        for i in range(r):
            row = []
            for j in range(r):
                off, g = _twisted_hyperderivative(A[i, j], u, n)
                nz = g.nonzero_rows()
                if nz.any():
                    min_val = min(min_val, off + int(nz.argmax()))
                # constant term (s^0) of s^off * g
                row.append(g.coeff(-off) if off <= 0 and -off < g.tprec else LaurentU.zero(F))
            rows.append(row)
        blocks.append(BlockMat(F, rows))
    zero = BlockMat.zeros(F, r, LaurentU)
    const = BlockMat.from_blocks([[blocks[j - i] if j >= i else zero for j in range(k + 1)]
                                  for i in range(k + 1)])
    det0 = const.det()
    integral = min_val >= 0
    invertible = not det0.is_zero()
    return {
        "min_valuation": None if min_val == float("inf") else int(min_val),
        "integral": integral,
        "invertible": invertible,
        "weight": [u, v],
        "pass": integral and invertible,
    }


# -- Carlitz fixtures -------------------------------------------------------
def carlitz_motive(field: FieldParams, n: int = 1) -> MotiveDesc:
    return MotiveDesc(1, BlockMat(field, [[TSeries.t_minus_theta(field) ** n]]), ell=n)


def dual_carlitz_motive(field: FieldParams, n: int = 1) -> DualMotiveDesc:
    return DualMotiveDesc(1, BlockMat(field, [[TSeries.t_minus_theta(field) ** n]]), ell=n)


def carlitz_tmodule(field: FieldParams, n: int = 1) -> TModuleDesc:
    """n-th tensor power: A_0 = theta + (superdiagonal ones), A_1 = one in the bottom-left corner."""
    th, one, zero = LaurentU.theta(field), LaurentU.constant(field, 1), LaurentU.zero(field)
    A0 = [[th if i == j else one if j == i + 1 else zero for j in range(n)] for i in range(n)]
    A1 = [[one if (i, j) == (n - 1, 0) else zero for j in range(n)] for i in range(n)]
    return TModuleDesc(n, (BlockMat(field, A0), BlockMat(field, A1)))


def carlitz_upsilon(cfg: SpecialFnConfig, n: int = 1) -> Trivialization:
    """omega^-n = (t - theta)^n Omega^n."""
    F = cfg.field
    g = TSeries.t_minus_theta(F) ** n * omega_big_power(cfg, n)
    return Trivialization(BlockMat(F, [[g]]), "tau")


def carlitz_psi(cfg: SpecialFnConfig, n: int = 1) -> Trivialization:
    return Trivialization(BlockMat(cfg.field, [[omega_big_power(cfg, n)]]), "sigma")


__all__ = [
    "MotiveDesc", "DualMotiveDesc", "TModuleDesc", "Trivialization",
    "prolong_motive", "prolong_dual", "prolong_tmodule", "dual_prolonged_action",
    "transpose_duality_check", "verify_trivialization", "prolong_trivialization",
    "purity_prolong_check", "is_nilpotent_shift", "carlitz_motive", "dual_carlitz_motive",
    "carlitz_tmodule", "carlitz_upsilon", "carlitz_psi",
]
