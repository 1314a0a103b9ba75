"""Smoke test for the hellinger_geom extension module.

Build and install first, for example:
    pip install --no-build-isolation ./crates/python
then run:
    python python/smoke_test.py
"""

import json
import math

import hellinger_geom as hg


def close(a, b, tol=1e-12):
    assert abs(a - b) <= tol * (1.0 + abs(b)), (a, b)


def measures():
    a = hg.Measure.discrete([0], [1.0])
    b = hg.Measure.discrete([1], [1.0])
    c = hg.Measure.discrete([0, 1, "x", (2, "y")], [0.5, 3.0, 0.25, 1.0])
    close(hg.hellinger_distance(a, b), math.sqrt(2.0))
    close(hg.hellinger_distance(a, b, sigma=3.0), 3.0 * math.sqrt(2.0))
    assert hg.hellinger_distance(c, c) == 0.0
    close(c.total_mass, 4.75)
    assert hg.Measure.from_json(c.to_json()) == c
    assert dict(c.atoms())[(2, "y")] == 1.0
    assert json.loads(a.to_json())["type"] == "discrete"

    d = hg.hellinger_distance(a, c, sigma=2.0)
    for s in (0.0, 0.25, 0.5, 1.0):
        mid = hg.hellinger_geodesic(a, c, s)
        close(mid.total_mass, hg.geodesic_mass(a, c, s, sigma=2.0))
        close(hg.hellinger_distance(a, mid, sigma=2.0), s * d, 1e-12)
    close(hg.tv_distance(a, b), 2.0)
    close(hg.cone_distance(a, c), hg.hellinger_distance(a, c), 1e-12)

    p = hg.Measure.discrete([0, 1], [0.5, 0.5])
    q = hg.Measure.discrete([1, 2], [0.5, 0.5])
    bh = hg.bhattacharyya_distance(p, q)
    close(hg.bhattacharyya_distance(p, hg.spherical_geodesic(p, q, 0.5)), bh / 2.0, 1e-12)

    g = hg.Measure.grid([0.0], [0.5], [4], [1.0, 2.0, 0.0, 1.0])
    close(g.total_mass, 2.0)
    assert g.density() == [1.0, 2.0, 0.0, 1.0]


def families():
    close(hg.poisson_fr([1.0], [4.0]), 1.0)
    close(hg.exp_fr([1.0], [4.0]), math.log(2.0))
    assert hg.poisson_hellinger([1.0], [4.0]) < hg.poisson_fr([1.0], [4.0])

    g0 = hg.Gaussian([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]])
    g1 = hg.Gaussian([1.0, 0.5], [[2.0, 0.3], [0.3, 1.0]])
    d, method = hg.gaussian_fr(g0, g1)
    assert method == "shooting", method
    assert hg.gaussian_hellinger(g0, g1) < d
    path = hg.gaussian_geodesic(g0, g1, samples=4)
    assert len(path) == 5 and path[0][1] == g0 and path[-1][1] == g1

    closed, fd = hg.fisher_matrix("poisson", [4.0])
    close(closed[0][0], 1.0 / 16.0)
    close(fd[0][0], closed[0][0], 1e-6)
    closed, fd = hg.fisher_matrix("gauss", hg.Gaussian([0.5], [[2.0]]))
    assert len(closed) == 2 and len(fd) == 2


def errors():
    try:
        hg.Measure.discrete([0], [-1.0])
    except hg.HellingerError:
        pass
    else:
        raise AssertionError("negative weight accepted")
    try:
        hg.verify("geometry")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown suite accepted")


def verification():
    ok, report = hg.verify("hellinger", seed=5)
    assert ok, report
    assert report == hg.verify("hellinger", seed=5)[1]


if __name__ == "__main__":
    measures()
    families()
    errors()
    verification()
    print("smoke test passed")
