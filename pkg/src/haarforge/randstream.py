"""Seeded, reproducible randomness plus the special angle distributions.

The bit source is the counter-based Philox generator keyed by
``(seed, stream_id)``, so sibling streams are statistically independent and
a batch split across streams is reproducible regardless of execution order.
Gaussians use the polar (Marsaglia) form of the Box-Muller transform; angle
laws are exact inverse-CDF or order-statistic constructions, documented on
each method.  Replaying an identical call sequence on an identical
``(seed, stream_id)`` reproduces every output bit for bit.

A stream is single-owner: do not share one instance across concurrent
tasks; create siblings with distinct ``stream_id`` instead.
"""

from __future__ import annotations

import numpy as np


class RandomStream:
    """Deterministic stream of uniforms, Gaussians and angle variates."""

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.stream_id = int(stream_id) & 0xFFFFFFFFFFFFFFFF
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def sibling(self, stream_id: int) -> "RandomStream":
        """Independent stream with the same seed and a new stream_id."""
        return RandomStream(self.seed, stream_id)

    # -- primitive draws --------------------------------------------------

    def uniform(self, lo: float = 0.0, hi: float = 1.0, size=None):
        """Uniform on [lo, hi).  Raises ValueError when lo >= hi."""
        if not lo < hi:
            raise ValueError(f"need lo < hi, got [{lo}, {hi})")
        if lo == 0.0 and hi == 1.0:
            return self._gen.random(size)
        return lo + (hi - lo) * self._gen.random(size)

    _CHUNK = 1 << 20  # bound temporary sizes; large allocations fault slowly

    def _gaussian_block(self, k: int) -> np.ndarray:
        # polar Box-Muller: draw (u, v) uniform on (-1, 1)^2, accept when
        # s = u^2 + v^2 lies in (0, 1), emit u*sqrt(-2 ln s / s) followed by
        # the matching v-components, chunk by chunk.
        out = np.empty(k)
        filled = 0
        while filled < k:
            need = min(self._CHUNK, k - filled)
            m = max(8, int(need * 0.7) + 16)
            u = 2.0 * self._gen.random(m) - 1.0
            v = 2.0 * self._gen.random(m) - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            u, v, s = u[ok], v[ok], s[ok]
            f = np.sqrt(-2.0 * np.log(s) / s)
            take_u = min(len(s), need)
            out[filled:filled + take_u] = (u * f)[:take_u]
            filled += take_u
            if filled < k:
                take_v = min(len(s), k - filled)
                out[filled:filled + take_v] = (v * f)[:take_v]
                filled += take_v
        return out

    def gaussian(self, size=None):
        """Standard normal variates."""
        if size is None:
            return float(self._gaussian_block(1)[0])
        n = int(np.prod(size))
        return self._gaussian_block(n).reshape(size)

    # -- angle laws --------------------------------------------------------

    def cos_theta_so(self, j: int, size=None):
        """g_{j+1} / sqrt(g_1^2 + ... + g_{j+1}^2) for j+1 fresh Gaussians.

        Marginal density on (-1, 1) proportional to (1 - s^2)^((j-2)/2);
        a zero denominator (probability zero) triggers a redraw.
        """
        if j < 1:
            raise ValueError("j >= 1 required")
        scalar = size is None
        n = 1 if scalar else int(np.prod(size))
        g = self.gaussian((n, j + 1))
        norm = np.sqrt((g * g).sum(axis=1))
        while np.any(norm == 0.0):
            bad = norm == 0.0
            g[bad] = self.gaussian((int(bad.sum()), j + 1))
            norm = np.sqrt((g * g).sum(axis=1))
        val = g[:, j] / norm
        return float(val[0]) if scalar else val.reshape(size)

    def phi_unitary(self, j: int, size=None):
        """phi = arcsin(xi^(1/(2j))) on [0, pi/2]: density ~ cos(phi) sin(phi)^(2j-1)."""
        if j < 1:
            raise ValueError("j >= 1 required")
        return phi_from_xi(self._gen.random(size), j)

    def rho_symplectic(self, j: int, size=None):
        """rho on [0, pi/2] with density ~ cos^3(rho) sin(rho)^(4j-1).

        Equivalently sin^2(rho) ~ Beta(2j, 2), realized exactly as the
        second largest of 2j+1 independent uniforms.
        """
        if j < 1:
            raise ValueError("j >= 1 required")
        scalar = size is None
        n = 1 if scalar else int(np.prod(size))
        u = self._gen.random((n, 2 * j + 1))
        second_largest = np.partition(u, 2 * j - 1, axis=1)[:, 2 * j - 1]
        rho = np.arcsin(np.sqrt(second_largest))
        return float(rho[0]) if scalar else rho.reshape(size)

    def sin2phi_quaternion(self, size=None):
        """phi = arcsin(sqrt(xi)) on [0, pi/2]: density ~ sin(2 phi)."""
        return sin2phi_from_xi(self._gen.random(size))


def phi_from_xi(xi, j: int):
    """The pure transform behind phi_unitary (exposed for boundary tests)."""
    return np.arcsin(np.asarray(xi) ** (1.0 / (2.0 * j))) if np.ndim(xi) else float(
        np.arcsin(xi ** (1.0 / (2.0 * j))))


def sin2phi_from_xi(xi):
    """The pure transform behind sin2phi_quaternion."""
    return np.arcsin(np.sqrt(xi)) if np.ndim(xi) else float(np.arcsin(np.sqrt(xi)))
