"""Transfer-matrix transmission of 1D layered media at normal incidence.

Used as a physically realizable noisy-probe generator: the complex
transmission of a random stack imprints narrow uncorrelated lines on a
broadband pulse.  Conventions: time dependence exp(-i w t), forward phase
accumulation exp(+i n k d) per layer, field amplitudes referenced at the
stack faces (no propagation phase in the surroundings).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from coincars.rng import stream_rng
from coincars.spectra import ComplexSpectrum, DomainError, FrequencyGrid

__all__ = ["Layer", "Stack", "transmission", "transfer_matrix", "random_stack", "read_stack_file"]

_TWO_PI_UM_PER_CM = 2.0 * np.pi * 1e-4  # wavenumber (cm^-1) * thickness (um) -> phase


@dataclass(frozen=True)
class Layer:
    """Homogeneous slab: complex refractive index and thickness in um."""

    index: complex
    thickness: float

    def __post_init__(self):
        n = complex(self.index)
        object.__setattr__(self, "index", n)
        if not (self.thickness > 0 and np.isfinite(self.thickness)):
            raise DomainError(f"layer thickness must be positive, got {self.thickness}")
        if n.real <= 0:
            raise DomainError(f"Re(n) must be positive, got {n}")
        if n.imag < 0:
            raise DomainError(f"passive media need Im(n) >= 0, got {n}")


@dataclass(frozen=True)
class Stack:
    """Ordered layer list embedded in a uniform surrounding index."""

    layers: tuple[Layer, ...] = ()
    surround: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not (self.surround > 0 and np.isfinite(self.surround)):
            raise DomainError(f"surrounding index must be positive, got {self.surround}")

    def reversed(self) -> "Stack":
        return Stack(layers=self.layers[::-1], surround=self.surround)


def transfer_matrix(stack: Stack, grid: FrequencyGrid) -> np.ndarray:
    """Per-frequency 2x2 transfer matrix, shape (count, 2, 2).

    Relates forward/backward amplitudes on the input side to those on the
    output side; built from index-step interface matrices and intra-layer
    propagation.
    """
    wn = grid.points()
    count = wn.size
    m = np.zeros((count, 2, 2), dtype=np.complex128)
    m[:, 0, 0] = 1.0
    m[:, 1, 1] = 1.0
    indices = [stack.surround] + [ly.index for ly in stack.layers] + [stack.surround]
    for j, layer in enumerate(stack.layers):
        m = m @ _interface(indices[j], indices[j + 1])
        delta = layer.index * (_TWO_PI_UM_PER_CM * layer.thickness) * wn
        prop = np.zeros((count, 2, 2), dtype=np.complex128)
        prop[:, 0, 0] = np.exp(-1j * delta)
        prop[:, 1, 1] = np.exp(1j * delta)
        m = m @ prop
    m = m @ _interface(indices[-2], indices[-1])
    return m


def _interface(n_a: complex, n_b: complex) -> np.ndarray:
    r = (n_a - n_b) / (n_a + n_b)
    t = 2.0 * n_a / (n_a + n_b)
    return np.array([[1.0, r], [r, 1.0]], dtype=np.complex128) / t


def transmission(stack: Stack, grid: FrequencyGrid) -> tuple[ComplexSpectrum, ComplexSpectrum]:
    """Complex field transmission t(w) and reflection r(w) at normal incidence."""
    m = transfer_matrix(stack, grid)
    t = 1.0 / m[:, 0, 0]
    r = m[:, 1, 0] * t
    return ComplexSpectrum(grid, t), ComplexSpectrum(grid, r)


def random_stack(
    layer_count: int,
    index_range: tuple[float, float] = (1.3, 2.2),
    thickness_range: tuple[float, float] = (0.5, 2.0),
    seed: int = 0,
) -> Stack:
    """Stack of ``layer_count`` layers with uniform random indices and thicknesses.

    Deterministic in ``seed``: indices are drawn first, then thicknesses,
    from the stream keyed by (seed, 0).
    """
    n_lo, n_hi = index_range
    d_lo, d_hi = thickness_range
    if not (0 < n_lo <= n_hi) or not (0 < d_lo <= d_hi):
        raise DomainError("index and thickness ranges must be positive and ordered")
    if layer_count < 0:
        raise DomainError("layer count must be non-negative")
    rng = stream_rng(seed, 0)
    indices = rng.uniform(n_lo, n_hi, layer_count)
    thicknesses = rng.uniform(d_lo, d_hi, layer_count)
    layers = tuple(Layer(complex(n), float(d)) for n, d in zip(indices, thicknesses))
    return Stack(layers=layers)


def read_stack_file(path) -> Stack:
    """Parse a plain-text stack description: rows of ``n_re, n_im, d_um``.

    Lines starting with ``#`` are comments; an empty file is the empty stack.
    """
    path = Path(path)
    layers: list[Layer] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        fields = [f.strip() for f in text.split(",")]
        try:
            if len(fields) != 3:
                raise ValueError("expected 3 comma-separated columns: n_re, n_im, d_um")
            n_re, n_im, d_um = (float(f) for f in fields)
            layers.append(Layer(complex(n_re, n_im), d_um))
        except (ValueError, DomainError) as exc:
            raise DomainError(f"{path}:{lineno}: {exc}") from exc
    return Stack(layers=tuple(layers))
