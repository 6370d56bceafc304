import numpy as np

from toeplitz_spectra.symbols import TrigPoly, from_inside_roots

CORPUS_COSINES = [
    [2.0, -1.0],
    [1.25, -0.5],
    [3.0, 1.0],
    [1.9, -0.2, -0.25],
    [3.0, -1.5, 0.2],
    [4.0, -1.2, 0.5, -0.3],
    [2.5, -0.6, -0.2, 0.1],
]


def corpus():
    return [TrigPoly.from_cosine(c, name=f"corpus{i}") for i, c in enumerate(CORPUS_COSINES)]


def band_corpus():
    """Strictly positive band symbols with simple inside roots."""
    kms = TrigPoly.from_cosine([1.25, -0.5], name="kms")
    two = TrigPoly.from_cosine([41 / 20, -1.0, 0.2], name="deg2")
    three = from_inside_roots([0.5, 0.3 * np.exp(1j * np.pi / 3), 0.3 * np.exp(-1j * np.pi / 3)],
                              name="deg3")
    return [kms, two, three]
