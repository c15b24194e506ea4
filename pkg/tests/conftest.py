import pathlib
import sys

import numpy as np
import pytest

# allow running the suite from a checkout without installing
_SRC = pathlib.Path(__file__).resolve().parents[1] / "src"
if str(_SRC) not in sys.path:
    sys.path.insert(0, str(_SRC))


@pytest.fixture
def rng():
    return np.random.default_rng(20020523)


def random_unitary(rng, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(rng, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = a @ a.conj().T
    return m / np.trace(m).real


def random_probability_vector(rng, dim: int) -> np.ndarray:
    p = rng.dirichlet(np.ones(dim))
    return np.sort(p)[::-1]


def bell_matrix() -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def sample_family_weights(rng, d: int, n: int, count: int) -> np.ndarray:
    """Uniform samples from the positivity region, via batched rejection."""
    lo = -1.0 / (d * d - n)
    out = []
    while sum(len(b) for b in out) < count:
        batch = rng.uniform(lo, 1.0, size=(max(4 * count, 256), n))
        y = (1.0 - batch.sum(axis=1)) / d**2
        keep = (y >= 0.0) & np.all(batch >= -y[:, None], axis=1)
        out.append(batch[keep])
    return np.concatenate(out)[:count]
