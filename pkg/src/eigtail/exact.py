"""Exact small-size normalizing constants via rational biorthogonalization.

For weights of the form ``x^a e^{-tau x}`` on the half line all mixed
moments are rational (``(k+a)!/tau^(k+a+1)``), so the Gram matrix of the
monomial pairs ``(lambda^i, lambda^(theta j))`` can be factored exactly
over the rationals.  The normalizing constant of the two-factor density
is then ``n! det(gram) = n! prod_j h_j`` with the ``h_j`` read off a
triangular factorization.  Everything in this module is exact: inputs are
converted to :class:`fractions.Fraction` once and no floats appear.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .ensembles import EnsembleSpec, WeightFamily
from .errors import DegeneracyError, DomainError, UnsupportedWeightError

__all__ = [
    "EXACT_SIZE_CAP", "moment", "BiorthogonalSystem", "biorthogonalize",
    "partition_exact", "partition_brute_force",
]

# Gram determinants of factorial moments grow super-exponentially; exact
# arithmetic keeps them correct but slow, so the size is capped.
EXACT_SIZE_CAP = 8


def moment(weight: WeightFamily, n: int, k: int) -> Fraction:
    """Exact moment ``int_0^inf x^k x^a e^{-tau x} dx = (k+a)!/tau^(k+a+1)``.

    ``a`` and ``tau`` come from the weight's factorial-moment form at size
    ``n``; weights without that form raise
    :class:`~eigtail.errors.UnsupportedWeightError`.
    """
    if k < 0:
        raise DomainError(f"moment order must be nonnegative, got {k}")
    a, tau = weight.exact_parameters(n)
    return Fraction(math.factorial(k + a)) / tau ** (k + a + 1)


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Monic polynomial pair families diagonalizing the monomial Gram.

    ``p_polys[i]`` holds the coefficients of ``p_i`` in ascending powers
    of ``lambda`` (degree ``i``, last coefficient 1); ``q_polys[j]`` holds
    the coefficients of ``q_j`` in ascending powers of ``lambda^theta``
    (degree ``theta j``, last coefficient 1).  The pairing
    ``<p_i, q_j> = int p_i(x) q_j(x) x^a e^{-tau x} dx`` equals
    ``h_j delta_ij`` exactly.
    """

    n: int
    theta: int
    p_polys: tuple[tuple[Fraction, ...], ...]
    q_polys: tuple[tuple[Fraction, ...], ...]
    h: tuple[Fraction, ...]
    gram: tuple[tuple[Fraction, ...], ...]


def _require_exact_ensemble(spec: EnsembleSpec, n: int) -> None:
    if n < 1:
        raise DomainError(f"size must be positive, got {n}")
    if n > EXACT_SIZE_CAP:
        raise DomainError(f"exact path is capped at size {EXACT_SIZE_CAP}, "
                          f"got {n}")
    if spec.p(n) != n:
        raise UnsupportedWeightError(
            "the exact determinant identity needs one eigenvalue per size "
            f"unit; p({n}) = {spec.p(n)}")
    if spec.form != "two_factor":
        raise UnsupportedWeightError(
            "the exact path covers the two-factor interaction only")
    if spec.support.lo < 0:
        raise UnsupportedWeightError(
            "the exact path needs a half-line support (factorial moments)")


def biorthogonalize(spec: EnsembleSpec, n: int) -> BiorthogonalSystem:
    """Exact triangular biorthogonalization of the monomial pair basis.

    Builds the Gram matrix ``g[i][j] = moment(i + theta j)``, factors it
    as unit-lower times diagonal times unit-upper, and reads the monic
    polynomial coefficients off the inverse triangular factors.  The
    biorthogonality relations are re-verified from the coefficients by
    exact summation before returning.
    """
    _require_exact_ensemble(spec, n)
    theta = spec.theta
    gram = [[moment(spec.weight, n, i + theta * j) for j in range(n)]
            for i in range(n)]

    # Doolittle factorization over the rationals.
    work = [row[:] for row in gram]
    lower = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
             for i in range(n)]
    for k in range(n):
        pivot = work[k][k]
        if pivot == 0:
            raise DegeneracyError(f"Gram matrix has a zero leading minor "
                                  f"at order {k + 1}")
        for i in range(k + 1, n):
            factor = work[i][k] / pivot
            lower[i][k] = factor
            for m in range(k, n):
                work[i][m] -= factor * work[k][m]
    h = tuple(work[j][j] for j in range(n))
    unit_upper = [[work[i][j] / work[i][i] for j in range(n)]
                  for i in range(n)]

    # p-coefficients: rows of lower^{-1} (forward substitution).
    p_inv = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        p_inv[i][i] = Fraction(1)
        for k in range(i - 1, -1, -1):
            acc = Fraction(0)
            for m in range(k + 1, i + 1):
                acc += p_inv[i][m] * lower[m][k]
            p_inv[i][k] = -acc
    # q-coefficients: columns of unit_upper^{-1} (back substitution).
    q_inv = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        q_inv[j][j] = Fraction(1)
        for k in range(j - 1, -1, -1):
            acc = Fraction(0)
            for m in range(k + 1, j + 1):
                acc += unit_upper[k][m] * q_inv[m][j]
            q_inv[k][j] = -acc

    p_polys = tuple(tuple(p_inv[i][m] for m in range(i + 1))
                    for i in range(n))
    q_polys = tuple(tuple(q_inv[m][j] for m in range(j + 1))
                    for j in range(n))

    # Exact verification of <p_i, q_j> = h_j delta_ij from coefficients.
    for i in range(n):
        for j in range(n):
            acc = Fraction(0)
            for k, pc in enumerate(p_polys[i]):
                if pc == 0:
                    continue
                for m, qc in enumerate(q_polys[j]):
                    if qc == 0:
                        continue
                    acc += pc * qc * gram[k][m]
            expected = h[j] if i == j else Fraction(0)
            if acc != expected:
                raise DegeneracyError(
                    f"biorthogonality verification failed at ({i}, {j}): "
                    f"{acc} != {expected}")

    return BiorthogonalSystem(
        n=n, theta=theta, p_polys=p_polys, q_polys=q_polys, h=h,
        gram=tuple(tuple(row) for row in gram))


def partition_exact(spec: EnsembleSpec, n: int) -> Fraction:
    """Exact normalizing constant ``Z_n = n! prod_j h_j`` of the density.

    Equals the n-fold integral of the unnormalized two-factor density
    over the half line (the two interaction factors carry matching signs
    there, so the absolute values drop and the determinant identity
    applies with constant 1).
    """
    system = biorthogonalize(spec, n)
    product = Fraction(math.factorial(n))
    for value in system.h:
        product *= value
    return product


def partition_brute_force(spec: EnsembleSpec, n: int) -> Fraction:
    """Independent exact oracle: expand both interaction determinants.

    Writes the two factors as sums over permutation pairs and integrates
    each resulting monomial via :func:`moment`:
    ``sum_{s,t} sgn(s) sgn(t) prod_i moment(s(i)-1 + theta (t(i)-1))``.
    Factorial cost; intended for sizes up to 4 or 5.
    """
    _require_exact_ensemble(spec, n)
    if n > 5:
        raise DomainError(f"the brute-force expansion is factorial in the "
                          f"size; got {n} > 5")
    theta = spec.theta
    cache = {k: moment(spec.weight, n, k)
             for k in range((n - 1) + theta * (n - 1) + 1)}
    total = Fraction(0)
    for perm_s in itertools.permutations(range(n)):
        sign_s = _permutation_sign(perm_s)
        for perm_t in itertools.permutations(range(n)):
            term = Fraction(sign_s * _permutation_sign(perm_t))
            for i in range(n):
                term *= cache[perm_s[i] + theta * perm_t[i]]
            total += term
    return total


def _permutation_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        cursor = start
        while not seen[cursor]:
            seen[cursor] = True
            cursor = perm[cursor]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
