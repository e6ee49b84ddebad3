"""Exact analysis of Anosov suspension geometry on mapping tori.

Algebraic certificates (determinant, characteristic polynomial, modular
irreducibility, the symplectic-matrix identity) are exact integer/rational
arithmetic; eigenvalue work is floating point with stated tolerances,
matching where the underlying arguments are exact versus approximate.
Functions of the suspension parameter never enter the trig ring: the
invariant eigen-coframe absorbs all of the t-dependence, and the suspension
presymplectic form has constant coefficients there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._rational import Q, rat
from .cohomology import SuspensionH1, suspension_h1

COND_TOL = 1e-9
RECIPROCITY_RTOL = 1e-8


# -- exact matrix helpers --------------------------------------------------------


def _mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def _mat_det_exact(A) -> Q:
    n = len(A)
    M = [[rat(x) for x in row] for row in A]
    det = rat(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return rat(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] * inv
            if f != 0:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def _mat_inv_exact(A):
    n = len(A)
    M = [[rat(x) for x in row] + [rat(1 if i == j else 0) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def charpoly_exact(A) -> List[int]:
    """Coefficients of det(xI - A), highest degree first, exact integers.

    Faddeev-LeVerrier over rationals; integer input yields integer output.
    """
    n = len(A)
    Arat = [[rat(x) for x in row] for row in A]
    coeffs = [rat(1)]
    M = [[rat(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        AM = _mat_mul(Arat, M)
        for i in range(n):
            AM[i][i] += coeffs[-1]
        M = AM
        tr = sum(_mat_mul(Arat, M)[i][i] for i in range(n))
        coeffs.append(-tr / k)
    out = []
    for c in coeffs:
        num = int(c)
        if c != num:
            raise AssertionError("characteristic polynomial is not integral")
        out.append(num)
    return out


def _poly_eval_matrix(coeffs: Sequence[int], A):
    """p(A) by Horner's rule, integer coefficients highest degree first (exact)."""
    n = len(A)
    Ar = [[rat(x) for x in row] for row in A]
    out = [[rat(0)] * n for _ in range(n)]
    for c in coeffs:
        out = _mat_mul(out, Ar)
        for i in range(n):
            out[i][i] += rat(c)
    return out


# -- matrix report ------------------------------------------------------------------


@dataclass
class MatrixReport:
    matrix: list
    det: int
    charpoly: List[int]  # highest degree first
    eigenvalues: List[float]
    mu: List[float]  # leafwise part
    lambdas: List[float]  # transverse part
    flags: dict = field(default_factory=dict)


class NonSquareInput(ValueError):
    pass


def analyze_matrix(A: Sequence[Sequence[int]], leaf_indices: Sequence[int]) -> MatrixReport:
    """Full report for an integer matrix with a declared spectrum partition.

    leaf_indices selects the leafwise eigenvalues out of the spectrum sorted
    in descending order; the rest form the transverse part.
    """
    for row in A:
        for x in row:
            if x != int(x):
                raise ValueError(f"matrix entries must be integers, got {x}")
    A = [[int(x) for x in row] for row in A]
    n = len(A)
    if any(len(row) != n for row in A):
        raise NonSquareInput("matrix must be square")
    det = _mat_det_exact(A)
    det_int = int(det)
    cp = charpoly_exact(A)
    # exact annihilation check
    pa = _poly_eval_matrix(cp, A)
    if any(any(x != 0 for x in row) for row in pa):
        raise AssertionError("characteristic polynomial does not annihilate the matrix")
    eigs = np.linalg.eigvals(np.array(A, dtype=float))
    if np.abs(eigs.imag).max(initial=0.0) > COND_TOL:
        real_positive = False
    else:
        real_positive = bool((eigs.real > 0).all())
    eig_sorted = sorted((float(e.real) for e in eigs), reverse=True)
    prod_ok = abs(np.prod(eig_sorted) - det_int) <= 1e-9 * max(1.0, abs(det_int))
    leaf_indices = sorted(set(int(i) for i in leaf_indices))
    if any(not 0 <= i < n for i in leaf_indices):
        raise ValueError("leaf index out of range")
    mu = [eig_sorted[i] for i in leaf_indices]
    lambdas = [e for i, e in enumerate(eig_sorted) if i not in leaf_indices]
    distinct = all(
        abs(a - b) > COND_TOL for i, a in enumerate(eig_sorted) for b in eig_sorted[i + 1 :]
    )
    cond1 = all(abs(l - 1.0) > COND_TOL for l in lambdas) and all(
        abs(l / m - 1.0) > COND_TOL for l in lambdas for m in mu
    )
    recip = reciprocity_check(lambdas)
    irr = irreducibility_certificate(cp) if n <= 6 else ("Unknown", None)
    cond2 = bool(distinct and irr[0].startswith("Irreducible"))
    report = MatrixReport(
        matrix=A,
        det=det_int,
        charpoly=cp,
        eigenvalues=eig_sorted,
        mu=mu,
        lambdas=lambdas,
        flags={
            "det_one": det_int == 1,
            "diagonalizable_positive": bool(real_positive and distinct),
            "eig_product_matches_det": bool(prod_ok),
            "cond1": bool(cond1),
            "cond2_certificate": {"status": irr[0], "detail": irr[1], "holds": cond2},
            "reciprocity": recip.ok,
        },
    )
    return report


# -- irreducibility -----------------------------------------------------------------


class UnsupportedDegree(ValueError):
    pass


def _poly_mod_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_mod_divides(d, f, p):
    """Does monic d divide f in F_p[X]?  Coefficients lowest-first."""
    f = list(f)
    dd = len(d) - 1
    for i in range(len(f) - 1, dd - 1, -1):
        c = f[i] % p
        if c == 0:
            continue
        shift = i - dd
        for j, x in enumerate(d):
            f[shift + j] = (f[shift + j] - c * x) % p
    return all(c % p == 0 for c in f)


def irreducibility_certificate(charpoly: Sequence[int]) -> Tuple[str, Optional[object]]:
    """Certificate for a monic integer polynomial of degree <= 6.

    Tries exhaustive factor search modulo small primes first (a modular
    irreducible image certifies irreducibility over the integers); falls back
    to a bounded integer factor-pair search with per-coefficient bounds
    binom(d, j) R^j from the numeric root radius R.
    coefficients highest degree first; returns (status, detail).
    """
    cp = [int(c) for c in charpoly]
    if cp[0] != 1:
        raise ValueError("polynomial must be monic")
    deg = len(cp) - 1
    if deg > 6:
        raise UnsupportedDegree("degree above 6 is not supported")
    if deg <= 1:
        return ("IrreducibleByFactorSearch", None)
    low = cp[::-1]  # lowest-first

    for p in (2, 3, 5, 7, 11):
        if cp[-1] % p == 0:
            # X divides mod p; the mod-p image is reducible, try next prime
            continue
        fp = [c % p for c in low]
        reducible = False
        for d in range(1, deg // 2 + 1):
            for tail in product(range(p), repeat=d):
                divisor = list(tail) + [1]  # monic degree-d
                if _poly_mod_divides(divisor, fp, p):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return ("IrreducibleModP", p)

    # bounded integer factor search
    roots = np.roots(np.array(cp, dtype=float))
    R = float(np.abs(roots).max()) + 1e-6
    from math import comb

    def candidates(d):
        bounds = [int(np.floor(comb(d, d - j) * R ** (d - j))) + 1 for j in range(d)]
        ranges = [range(-b, b + 1) for b in bounds]
        for tail in product(*ranges):
            yield list(tail) + [1]

    def divides_int(dv, f):
        f = [rat(c) for c in f]
        dd = len(dv) - 1
        for i in range(len(f) - 1, dd - 1, -1):
            c = f[i]
            if c == 0:
                continue
            shift = i - dd
            for j, x in enumerate(dv):
                f[shift + j] -= c * x
            f[i] = rat(0)
        if any(c != 0 for c in f):
            return False
        return True

    for d in range(1, deg // 2 + 1):
        for dv in candidates(d):
            if divides_int(dv, low):
                return ("ReducibleWithFactor", dv[::-1])
    return ("IrreducibleByFactorSearch", None)


# -- reciprocity ---------------------------------------------------------------------


@dataclass
class ReciprocityResult:
    ok: bool
    unmatched: Optional[float] = None
    pairs: Optional[List[Tuple[float, float]]] = None


def reciprocity_check(lambdas: Sequence[float], rtol: float = RECIPROCITY_RTOL) -> ReciprocityResult:
    """Greedy matching of each value with its reciprocal, multiset-exact."""
    vals = [float(x) for x in lambdas]
    if any(x <= 0 for x in vals):
        raise ValueError("values must be positive")
    remaining = sorted(vals)
    pairs = []
    while remaining:
        x = remaining.pop()
        if abs(x - 1.0) <= rtol:
            pairs.append((x, x))
            continue
        target = 1.0 / x
        match = next(
            (i for i, y in enumerate(remaining) if abs(y - target) <= rtol * max(1.0, target)),
            None,
        )
        if match is None:
            return ReciprocityResult(False, unmatched=x)
        pairs.append((x, remaining.pop(match)))
    return ReciprocityResult(True, pairs=pairs)


# -- symplectic matrices ---------------------------------------------------------------


def symplectic_from_symmetric(X, Y):
    """S = [[X + Y X^-1 Y, Y X^-1], [X^-1 Y, X^-1]] for symmetric X, Y (exact).

    Verifies S^T J S = J and det S = 1 over the rationals; raises on
    asymmetric or singular input.
    """
    X = [[rat(v) for v in row] for row in X]
    Y = [[rat(v) for v in row] for row in Y]
    n = len(X)
    if any(len(r) != n for r in X) or len(Y) != n or any(len(r) != n for r in Y):
        raise ValueError("X and Y must be square of equal size")
    for M in (X, Y):
        for i in range(n):
            for j in range(n):
                if M[i][j] != M[j][i]:
                    raise ValueError("inputs must be symmetric")
    Xinv = _mat_inv_exact(X)
    YXinv = _mat_mul(Y, Xinv)
    XinvY = _mat_mul(Xinv, Y)
    YXinvY = _mat_mul(YXinv, Y)
    top_left = [[X[i][j] + YXinvY[i][j] for j in range(n)] for i in range(n)]
    S = [top_left[i] + YXinv[i] for i in range(n)] + [XinvY[i] + Xinv[i] for i in range(n)]

    # J = [[0, I], [-I, 0]]
    m = 2 * n
    J = [[rat(0)] * m for _ in range(m)]
    for i in range(n):
        J[i][n + i] = rat(1)
        J[n + i][i] = rat(-1)
    ST = [[S[j][i] for j in range(m)] for i in range(m)]
    if _mat_mul(_mat_mul(ST, J), S) != J:
        raise AssertionError("S^T J S != J")
    if _mat_det_exact(S) != 1:
        raise AssertionError("det S != 1")
    return S


# -- suspension presymplectic form -------------------------------------------------------


@dataclass
class SuspensionFormReport:
    ok: bool
    reason: Optional[str] = None
    rank: Optional[int] = None
    kernel_dim: Optional[int] = None
    omega_matrix: Optional[np.ndarray] = None
    pairing_order: Optional[list] = None


def build_suspension_form(
    A: Sequence[Sequence[int]],
    leaf_indices: Sequence[int],
    eigenframe: np.ndarray,
    tol: float = COND_TOL,
) -> SuspensionFormReport:
    """Constant-coefficient presymplectic form in the invariant eigen-coframe.

    eigenframe columns are eigenvectors ordered like the descending spectrum;
    the transverse part must be reciprocity-paired.  The form pairs each
    transverse covector with the one of its reciprocal eigenvalue; closedness
    is automatic for the commuting (constant) eigenframe, which is asserted,
    and the kernel is checked by exact-rank linear algebra at a point.
    """
    report = analyze_matrix(A, leaf_indices)
    lam = report.lambdas
    if not lam:
        return SuspensionFormReport(
            False, reason="transverse rank zero: no presymplectic pairing available"
        )
    recip = reciprocity_check(lam)
    if not recip.ok:
        return SuspensionFormReport(False, reason=f"reciprocity fails at {recip.unmatched}")
    n = len(report.matrix)
    V = np.asarray(eigenframe, dtype=float)
    if V.shape != (n, n):
        return SuspensionFormReport(False, reason="eigenframe must be n x n")
    Anp = np.array(report.matrix, dtype=float)
    eig_sorted = report.eigenvalues
    for j in range(n):
        res = np.linalg.norm(Anp @ V[:, j] - eig_sorted[j] * V[:, j])
        if res > 1e-7 * max(1.0, abs(eig_sorted[j])) * np.linalg.norm(V[:, j]):
            return SuspensionFormReport(False, reason=f"eigenframe column {j} is not an eigenvector")
    if abs(np.linalg.det(V)) < 1e-12:
        return SuspensionFormReport(False, reason="ill-conditioned eigenframe")
    # constant frame fields commute: structure constants vanish identically
    B = np.linalg.inv(V)  # rows: dual coframe in torus coordinates

    trans_positions = [i for i in range(n) if i not in set(leaf_indices)]
    unpaired = list(trans_positions)
    pairs = []
    while unpaired:
        i = unpaired.pop(0)
        li = eig_sorted[i]
        j = min(
            (jj for jj in unpaired if abs(eig_sorted[jj] * li - 1.0) <= 1e-6),
            default=None,
            key=lambda jj: abs(eig_sorted[jj] * li - 1.0),
        )
        if j is None:
            return SuspensionFormReport(False, reason=f"no reciprocal partner for {li}")
        unpaired.remove(j)
        pairs.append((i, j))

    # omega = sum over pairs beta_i ^ beta_j on the torus factor, extended by
    # zero on dt; coordinates (torus..., t)
    omega = np.zeros((n + 1, n + 1))
    for (i, j) in pairs:
        omega[:n, :n] += np.outer(B[i], B[j]) - np.outer(B[j], B[i])
    rank = int(np.linalg.matrix_rank(omega, tol=1e-9))
    kernel_dim = n + 1 - rank
    ok = rank == len(trans_positions)
    # kernel must contain the leaf eigenvectors and the suspension direction
    for idx in leaf_indices:
        vec = np.zeros(n + 1)
        vec[:n] = V[:, idx]
        if np.linalg.norm(omega @ vec) > 1e-9 * max(1.0, np.linalg.norm(vec)):
            return SuspensionFormReport(False, reason=f"leaf eigenvector {idx} not in kernel")
    dt = np.zeros(n + 1)
    dt[n] = 1.0
    if np.linalg.norm(omega @ dt) > 1e-12:
        return SuspensionFormReport(False, reason="suspension direction not in kernel")
    return SuspensionFormReport(
        ok=ok,
        rank=rank,
        kernel_dim=kernel_dim,
        omega_matrix=omega,
        pairing_order=pairs,
        reason=None if ok else "rank mismatch",
    )


def suspension_h1_report(A, leaf_indices, dense_leaves: bool = True) -> SuspensionH1:
    """First leafwise cohomology of the suspension foliation of the matrix."""
    report = analyze_matrix(A, leaf_indices)
    return suspension_h1(report.mu, dense_leaves=dense_leaves)
