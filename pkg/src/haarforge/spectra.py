"""Eigenvalue-only random matrix models for SO(N).

The single coset factor E_{N-1} = R_{N-1}(theta_{N-1}) ... R_1(theta_1),
with cos(theta_j) following the normalized-Gaussian-ratio law, shares the
eigenvalue distribution of a full Haar SO(N) matrix, and so does any
reordering of its factors.  Two orderings are of special interest: the
descending product is lower Hessenberg, and the odd/even split
R_odd * R_even is five-diagonal (the CMV shape).  All angles here are
taken in [0, pi] (the arccos branch); conjugating by diag(-1, 1, ..., 1)
maps theta_1 to 2*pi - theta_1 without moving eigenvalues, so the branch
choice does not affect any spectral law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from haarforge.linalg import SquareMatrix
from haarforge.randstream import RandomStream

TWO_PI = 2.0 * np.pi


class ClosedFormMismatch(RuntimeError):
    """The Hessenberg entry formula disagreed with the rotation product."""


@dataclass(frozen=True)
class HessenbergCoeffs:
    """Cosines c_i = cos(theta_{i,N}) and the derived alpha/rho sequences.

    alpha_{i-1} = (-1)^{i-1} c_i for i = 1..n-1, with the boundary values
    alpha_{-1} = -1 and alpha_{n-1} = (-1)^{n-1}; rho_i = sqrt(1 - alpha_i^2).
    """

    n: int
    c: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.c)
        if len(c) != self.n - 1:
            raise ValueError("need n-1 cosines")
        if any(abs(x) > 1.0 for x in c):
            raise ValueError("cosines must lie in [-1, 1]")
        object.__setattr__(self, "c", c)

    def alpha(self, i: int) -> float:
        """alpha_i for -1 <= i <= n-1."""
        if i == -1:
            return -1.0
        if i == self.n - 1:
            return float((-1.0) ** (self.n - 1))
        return float((-1.0) ** i * self.c[i])

    def rho(self, i: int) -> float:
        """rho_i = (1 - alpha_i^2)^{1/2} for 0 <= i <= n-2."""
        a = self.alpha(i)
        return float(np.sqrt(max(0.0, 1.0 - a * a)))

    def thetas(self) -> np.ndarray:
        return np.arccos(np.clip(np.asarray(self.c), -1.0, 1.0))


# --- rotation products ------------------------------------------------------


def rotation_product_batch(thetas: np.ndarray, order, n: int) -> np.ndarray:
    """Stack of products of R_l(theta_l) over plane indices l in ``order``.

    thetas has shape (B, n-1); thetas[:, l-1] belongs to plane l.  The
    product is taken left to right, i.e. order[0] is the leftmost factor.
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    batch = thetas.shape[0]
    v = np.broadcast_to(np.eye(n), (batch, n, n)).copy()
    for l in order:
        t = thetas[:, l - 1]
        c, s = np.cos(t), np.sin(t)
        a = v[:, :, l - 1].copy()
        b = v[:, :, l]
        v[:, :, l - 1] = c[:, None] * a - s[:, None] * b
        v[:, :, l] = s[:, None] * a + c[:, None] * b
    return v


def _spectral_thetas(stream: RandomStream, n: int, count: int) -> np.ndarray:
    """(B, n-1) angles: theta_j = arccos of the Gaussian-ratio law."""
    out = np.empty((count, n - 1))
    for j in range(1, n):
        out[:, j - 1] = np.arccos(
            np.clip(stream.cos_theta_so(j, size=count), -1.0, 1.0))
    return out


def hessenberg_order(n: int):
    """Descending plane order: the lower-Hessenberg product E_{N-1}."""
    return list(range(n - 1, 0, -1))


def cmv_order(n: int):
    """Odd planes first, then even: the five-diagonal product R_odd R_even."""
    return list(range(1, n, 2)) + list(range(2, n, 2))


def hessenberg_batch(stream: RandomStream, n: int, count: int) -> np.ndarray:
    return rotation_product_batch(
        _spectral_thetas(stream, n, count), hessenberg_order(n), n)


def cmv_batch(stream: RandomStream, n: int, count: int) -> np.ndarray:
    return rotation_product_batch(
        _spectral_thetas(stream, n, count), cmv_order(n), n)


def hessenberg_E(stream: RandomStream, n: int) -> SquareMatrix:
    """One lower-Hessenberg orthogonal matrix with the Haar SO(n) spectrum."""
    if n < 2:
        raise ValueError("n >= 2 required")
    return SquareMatrix.from_array(hessenberg_batch(stream, n, 1)[0], kind="real")


def cmv_matrix(stream: RandomStream, n: int) -> SquareMatrix:
    """One five-diagonal orthogonal matrix with the Haar SO(n) spectrum."""
    if n < 2:
        raise ValueError("n >= 2 required")
    return SquareMatrix.from_array(cmv_batch(stream, n, 1)[0], kind="real")


# --- closed-form entries and the characteristic-polynomial recurrence ------


def hessenberg_entries(coeffs: HessenbergCoeffs) -> SquareMatrix:
    """The Hessenberg matrix written directly in terms of alpha/rho.

    Entry formula (one unified expression; the diagonal is the i = j case):

        E[i, j] = -alpha_{j-2} alpha_{i-1} * prod_{l=j-1}^{i-2} rho_l   (j <= i)
        E[i, i+1] = rho_{i-1}
        E[i, j] = 0                                                     (j > i+1)

    The sub-diagonal product bounds here are one index lower than a naive
    reading of the usual statement suggests; the rotation product is the
    source of truth, and this function cross-checks against it on every
    call, raising ClosedFormMismatch on disagreement.
    """
    n = coeffs.n
    m = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            prod = 1.0
            for l in range(j - 1, i - 1):
                prod *= coeffs.rho(l)
            m[i - 1, j - 1] = -coeffs.alpha(j - 2) * coeffs.alpha(i - 1) * prod
        if i <= n - 1:
            m[i - 1, i] = coeffs.rho(i - 1)
    ref = rotation_product_batch(coeffs.thetas()[None, :],
                                 hessenberg_order(n), n)[0]
    err = float(np.abs(m - ref).max())
    if err > 1e-12:
        raise ClosedFormMismatch(
            f"closed form deviates from the rotation product by {err:.3e}")
    return SquareMatrix.from_array(m, kind="real")


def recurrence_sequences(coeffs: HessenbergCoeffs, lam: complex):
    """All chi_k(lam), chi~_k(lam), k = 0..n, from the coupled recurrence

        chi_k  = lam * chi_{k-1} - alpha_{k-1} * chi~_{k-1}
        chi~_k = chi~_{k-1} - lam * alpha_{k-1} * chi_{k-1}

    started from chi_0 = chi~_0 = 1.  chi_k is the characteristic
    polynomial of the leading k x k block of the Hessenberg matrix.
    """
    chi, chit = [1.0 + 0.0j], [1.0 + 0.0j]
    lam = complex(lam)
    for k in range(1, coeffs.n + 1):
        a = coeffs.alpha(k - 1)
        chi.append(lam * chi[k - 1] - a * chit[k - 1])
        chit.append(chit[k - 1] - lam * a * chi[k - 1])
    return chi, chit


def charpoly_recurrence(coeffs: HessenbergCoeffs, lam: complex) -> complex:
    """chi_n(lam) = det(lam I - E) for the Hessenberg matrix E."""
    chi, _ = recurrence_sequences(coeffs, lam)
    return chi[-1]


# --- limit-law series -------------------------------------------------------


def trace_series_so_batch(stream: RandomStream, terms: int, count: int,
                          finite_trace: bool = False) -> np.ndarray:
    """Y_1 Y_2 + ... + Y_{T-1} Y_T (+ Y_T for the finite-trace form), with
    Y_i = Z_i / sqrt(Z_1^2 + ... + Z_i^2) from independent standard normals."""
    if terms < 2:
        raise ValueError("terms >= 2 required")
    out = np.empty(count)
    chunk = max(1, (1 << 21) // terms)  # keep the (chunk, terms) block small
    done = 0
    while done < count:
        b = min(chunk, count - done)
        z = stream.gaussian(size=(b, terms))
        norms = np.sqrt(np.cumsum(z * z, axis=1))
        while np.any(norms[:, 0] == 0.0):
            bad = norms[:, 0] == 0.0
            z[bad] = stream.gaussian(size=(int(bad.sum()), terms))
            norms = np.sqrt(np.cumsum(z * z, axis=1))
        y = z / norms
        s = (y[:, :-1] * y[:, 1:]).sum(axis=1)
        if finite_trace:
            s = s + y[:, -1]
        out[done:done + b] = s
        done += b
    return out


def trace_series_so(stream: RandomStream, terms: int,
                    finite_trace: bool = False) -> float:
    return float(trace_series_so_batch(stream, terms, 1, finite_trace)[0])


def trace_series_perm_batch(stream: RandomStream, terms: int,
                            count: int) -> np.ndarray:
    """Y_1 Y_2 + Y_2 Y_3 + ... with Y_i = 1 with probability 1/i, else 0."""
    if terms < 2:
        raise ValueError("terms >= 2 required")
    acc = np.zeros(count, dtype=np.int64)
    prev = stream.uniform(size=count) < 1.0  # Y_1 = 1 surely
    for i in range(2, terms + 1):
        cur = stream.uniform(size=count) < 1.0 / i
        acc += prev & cur
        prev = cur
    return acc


def trace_series_perm(stream: RandomStream, terms: int) -> int:
    return int(trace_series_perm_batch(stream, terms, 1)[0])


# --- batched eigenphase summaries -------------------------------------------


def so_min_eigenphase_batch(mats: np.ndarray, drop_forced: bool = True) -> np.ndarray:
    """Smallest eigenphase in (0, pi] of each real orthogonal matrix.

    Phases come from the symmetric part (m + m^T)/2, whose spectrum is
    {cos(theta_k)}; the largest cosine gives the smallest phase.  For odd
    dimension an SO matrix has a forced +1 eigenvalue (phase 0); with
    ``drop_forced`` it is excluded so spacing statistics are not polluted
    by a deterministic point mass.
    """
    mats = np.asarray(mats)
    n = mats.shape[-1]
    sym = 0.5 * (mats + np.swapaxes(mats, -1, -2)).real
    eig = np.linalg.eigvalsh(sym)  # ascending
    col = -2 if (n % 2 == 1 and drop_forced) else -1
    return np.arccos(np.clip(eig[:, col], -1.0, 1.0))
