"""Minimal dense matrix arithmetic for unitary-class matrices.

Everything here is plain double precision.  Matrices are immutable value
objects; operations are pure functions, safe to call from multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


class NotUnitaryError(ValueError):
    """Input violated a unitary / orthogonal precondition."""


class ConvergenceError(RuntimeError):
    """Root finding failed to meet its residual target."""


@dataclass(frozen=True)
class SquareMatrix:
    """An N x N matrix with a real/complex tag.

    ``entries`` is always stored as complex128; for ``kind == "real"`` every
    imaginary part is exactly zero.
    """

    dim: int
    entries: np.ndarray
    kind: str  # "real" | "complex"

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.shape != (self.dim, self.dim):
            raise ValueError(f"expected shape {(self.dim, self.dim)}, got {a.shape}")
        if not np.all(np.isfinite(a.view(float))):
            raise ValueError("non-finite entries")
        if self.kind not in ("real", "complex"):
            raise ValueError(f"bad kind {self.kind!r}")
        if self.kind == "real" and np.any(a.imag != 0.0):
            raise ValueError("real-kind matrix has nonzero imaginary parts")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_array(cls, a, kind=None):
        a = np.asarray(a)
        if kind is None:
            kind = "real" if not np.iscomplexobj(a) or np.all(a.imag == 0.0) else "complex"
        a = a.astype(complex)
        if kind == "real":
            a = a.real.astype(complex)
        return cls(dim=a.shape[0], entries=a, kind=kind)

    @classmethod
    def identity(cls, n, kind="real"):
        return cls(dim=n, entries=np.eye(n, dtype=complex), kind=kind)

    @property
    def array(self) -> np.ndarray:
        return self.entries


@dataclass(frozen=True)
class EigenPhaseList:
    """Sorted phases theta_1 <= ... <= theta_N, each in [0, 2*pi)."""

    dim: int
    phases: tuple = field(default_factory=tuple)

    def __post_init__(self):
        p = tuple(float(x) for x in self.phases)
        if len(p) != self.dim:
            raise ValueError("phase count != dim")
        if any(x < 0.0 or x >= TWO_PI for x in p):
            raise ValueError("phase outside [0, 2*pi)")
        if any(p[i] > p[i + 1] for i in range(len(p) - 1)):
            raise ValueError("phases not sorted")
        object.__setattr__(self, "phases", p)


def multiply(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    """Matrix product; result is real-kind iff both factors are."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    kind = "real" if (a.kind == "real" and b.kind == "real") else "complex"
    prod = a.entries @ b.entries
    if kind == "real":
        prod = prod.real.astype(complex)
    return SquareMatrix(dim=a.dim, entries=prod, kind=kind)


def adjoint_residual(m: SquareMatrix) -> float:
    """max |m^dagger m - I| (transpose instead of dagger for real kind)."""
    a = m.entries
    at = a.T if m.kind == "real" else a.conj().T
    return float(np.abs(at @ a - np.eye(m.dim)).max())


def determinant(m: SquareMatrix) -> complex:
    """Determinant by partially pivoted Gaussian elimination."""
    a = m.entries.copy()
    n = m.dim
    det = 1.0 + 0.0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) == 0.0:
            return 0.0 + 0.0j
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        det *= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k] / a[k, k], a[k, k + 1:])
    return complex(det)


def charpoly_eval(m: SquareMatrix, lam: complex) -> complex:
    """det(lam*I - m) by elimination."""
    shifted = SquareMatrix(
        dim=m.dim, entries=lam * np.eye(m.dim) - m.entries, kind="complex"
    )
    return determinant(shifted)


def symplectic_form(two_n: int) -> SquareMatrix:
    """The dual-involution matrix Z = I_N (x) [[0, -1], [1, 0]], size 2N."""
    if two_n % 2:
        raise ValueError("symplectic form needs even dimension")
    z = np.kron(np.eye(two_n // 2), np.array([[0.0, -1.0], [1.0, 0.0]]))
    return SquareMatrix(dim=two_n, entries=z.astype(complex), kind="real")


def symplectic_residual(m: SquareMatrix) -> float:
    """max |m^T Z m - Z|; ~0 together with adjoint_residual ~0 certifies Sp."""
    if m.dim % 2:
        raise ValueError("odd dimension has no symplectic structure")
    z = symplectic_form(m.dim).entries
    return float(np.abs(m.entries.T @ z @ m.entries - z).max())


# --- eigenphases of a unitary-class matrix -------------------------------
#
# The matrix is mapped through the Cayley transform anchored at a point
# e^{ia} kept away from the spectrum:
#
#     M(a) = i (I + e^{-ia} m)(I - e^{-ia} m)^{-1}
#
# M(a) is Hermitian with eigenvalues -cot((theta_k - a)/2), a strictly
# increasing function of theta_k on (a, a + 2*pi).  Householder
# tridiagonalization plus Sturm pivot counts then give an exact eigenvalue
# counting function, and each phase is located by index bisection to 1e-12
# in theta.  Multiple eigenphases (e.g. the doubly degenerate spectra of
# self-dual quaternion unitaries) fall out with the correct multiplicity
# because consecutive index searches converge to the same point.

_GOLDEN = 0.6180339887498949


def _tridiagonalize_hermitian(mat: np.ndarray):
    """Reduce a Hermitian matrix to real symmetric tridiagonal (d, e)."""
    a = mat.astype(complex).copy()
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k]
        nx = np.linalg.norm(x)
        if nx < 1e-300:
            continue
        v = x.copy()
        v[0] += (x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0) * nx
        nv = np.linalg.norm(v)
        if nv < 1e-300:
            continue
        v /= nv
        a[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ a[k + 1:, k:])
        a[k:, k + 1:] -= 2.0 * np.outer(a[k:, k + 1:] @ v, v.conj())
    d = np.real(np.diagonal(a)).copy()
    e = np.abs(np.diagonal(a, 1)).copy()  # off-diagonal phases are immaterial
    return d, e


def _count_leq(d: np.ndarray, e: np.ndarray, s: float) -> int:
    """# eigenvalues of tridiag(d, e) that are <= s (Sturm pivot count)."""
    count = 0
    q = d[0] - s
    if q <= 0.0:
        count += 1
    for i in range(1, len(d)):
        denom = q if q != 0.0 else -1e-300
        q = d[i] - s - e[i - 1] * e[i - 1] / denom
        if q <= 0.0:
            count += 1
    return count


def _pick_anchor(m: SquareMatrix) -> float:
    best_a, best_v = 0.0, -1.0
    for t in range(17):
        a = TWO_PI * ((t * _GOLDEN) % 1.0)
        v = abs(charpoly_eval(m, np.exp(1j * a)))
        if v > best_v:
            best_a, best_v = a, v
    if best_v <= 0.0:
        raise ConvergenceError("no anchor point off the unit-circle spectrum")
    return best_a


def eigenphases(m: SquareMatrix, theta_tol: float = 1e-12) -> EigenPhaseList:
    """Phases of the unit-circle eigenvalues of a unitary-class matrix.

    Raises NotUnitaryError if the input fails its orthogonality/unitarity
    precondition, ConvergenceError if the located roots do not satisfy the
    characteristic-polynomial residual check.
    """
    n = m.dim
    if adjoint_residual(m) > 1e-8 * n:
        raise NotUnitaryError("input is not unitary within 1e-8*N")
    a = _pick_anchor(m)
    w = np.exp(-1j * a) * m.entries
    eye = np.eye(n)
    herm = 1j * np.linalg.solve(eye - w, eye + w)
    herm = 0.5 * (herm + herm.conj().T)
    d, e = _tridiagonalize_hermitian(herm)

    raw = []
    for k in range(1, n + 1):
        lo, hi = 0.0, TWO_PI
        while hi - lo > theta_tol:
            mid = 0.5 * (lo + hi)
            s = -1.0 / np.tan(0.5 * mid)
            if _count_leq(d, e, s) >= k:
                hi = mid
            else:
                lo = mid
        raw.append(a + 0.5 * (lo + hi))

    # cluster within 1e-9 so exactly-degenerate roots share one representative
    raw.sort()
    phases, i = [], 0
    while i < len(raw):
        j = i
        while j + 1 < len(raw) and raw[j + 1] - raw[i] < 1e-9:
            j += 1
        rep = sum(raw[i:j + 1]) / (j - i + 1)
        phases.extend([rep] * (j - i + 1))
        i = j + 1
    phases = [p % TWO_PI for p in phases]
    phases = [0.0 if p > TWO_PI - 1e-9 else p for p in phases]
    phases.sort()

    residual_bound = 1e-8 * (2.0 ** n)
    for p in phases:
        if abs(charpoly_eval(m, np.exp(1j * p))) > residual_bound:
            raise ConvergenceError("eigenphase residual above tolerance")
    return EigenPhaseList(dim=n, phases=tuple(phases))
