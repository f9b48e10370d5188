import numpy as np

from coincars.spectra import ComplexSpectrum, FrequencyGrid


def make_spectrum(lo, hi, step, amp_fn):
    grid = FrequencyGrid.from_span(lo, hi, step)
    return ComplexSpectrum(grid, amp_fn(grid.points()).astype(complex))
