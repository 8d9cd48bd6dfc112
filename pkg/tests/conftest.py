import numpy as np
import pytest
from scipy.stats import poisson

from poisson_capacity import ChannelParams, InputDistribution, truncation_for


def mi_two_entropies(points, probs, amplitude, dark_current, k_max):
    """I(X;Y) = H(Y) - H(Y|X) by a plain double sum over scipy's Poisson pmf."""
    k = np.arange(k_max + 1)
    rows = np.array([poisson.pmf(k, x + dark_current) if x + dark_current > 0 else (k == 0).astype(float)
                     for x in points])
    py = probs @ rows

    def entropy(q):
        q = q[q > 0]
        return -np.sum(q * np.log(q))

    return entropy(py) - sum(p * entropy(r) for p, r in zip(probs, rows))


def finite_difference_gradient(f, x, h=1e-5, indices=None):
    g = np.zeros_like(x)
    for i in range(x.size) if indices is None else indices:
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (f(up) - f(dn)) / (2 * h)
    return g


def random_instance(rng, amplitude, dark_current, n_points):
    interior = np.sort(rng.uniform(0.05 * amplitude, 0.95 * amplitude, n_points - 2))
    # keep interior points apart so central differences cannot cross them
    interior = np.maximum.accumulate(interior + np.arange(interior.size) * 1e-3)
    points = np.concatenate(([0.0], interior, [amplitude]))
    probs = rng.uniform(0.1, 1.0, n_points)
    return InputDistribution(points, probs / probs.sum())


@pytest.fixture
def uniform01():
    params = ChannelParams(1.0, 0.0)
    return params, InputDistribution.uniform([0.0, 1.0]), truncation_for(params, 1e-12, margin=10)


def grid_blahut_arimoto(amplitude, dark_current, spacing, n_iters, k_max):
    """Textbook Blahut-Arimoto on a fixed uniform input grid, linear domain, scipy pmfs."""
    x = np.linspace(0.0, amplitude, int(round(amplitude / spacing)) + 1)
    k = np.arange(k_max + 1)
    W = poisson.pmf(k[None, :], x[:, None] + dark_current)
    if dark_current == 0:
        W[0] = (k == 0)
    r = np.full(x.size, 1.0 / x.size)
    logW = np.log(np.where(W > 0, W, 1.0))
    for _ in range(n_iters):
        q = r @ W
        d = np.sum(W * (logW - np.log(q)), axis=1)
        r = r * np.exp(d - d.max())
        r /= r.sum()
    q = r @ W
    return float(r @ np.sum(W * (logW - np.log(q)), axis=1)), x, r


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance verdict; the summary prints one line per criterion."""
    def record(number: int, ok: bool, detail: str) -> bool:
        prev = _CRITERIA.get(number)
        ok = ok and (prev is None or prev[0])
        detail = detail if prev is None else f"{prev[1]}; {detail}"
        _CRITERIA[number] = (ok, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
