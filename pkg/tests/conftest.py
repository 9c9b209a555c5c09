import pytest

from ellarr.arrangement import ArrangementSpec, coxeter_a, toric_face_category
from ellarr.elliptic import build_model
from ellarr.scwol import AcyclicCategory


def points_on_circle(n):
    """n distinct points on the elliptic curve (d = 1)."""
    return ArrangementSpec.from_dict(
        {"d": 1, "columns": [[1]] * n, "offsets": [f"{k}/{n}" for k in range(n)]})


def cycle_poset(k):
    """Face poset of a k-gon boundary: vertices 0..k-1, edges k..2k-1."""
    ranks = [0] * k + [1] * k
    labels = [f"v{i}" for i in range(k)] + [f"e{i}" for i in range(k)]
    sources, targets = [], []
    for i in range(k):
        sources += [i, (i + 1) % k]
        targets += [k + i, k + i]
    return AcyclicCategory(ranks, labels, sources, targets, [None] * (2 * k), {})


def rotation(cat, k, step):
    """Rotation of the k-gon boundary by ``step`` vertices, as permutation data."""
    op = [(i + step) % k for i in range(k)] + [k + (i + step) % k for i in range(k)]
    index = {(s, t): m for m, (s, t) in enumerate(zip(cat.sources, cat.targets))}
    mp = [index[op[s], op[t]] for s, t in zip(cat.sources, cat.targets)]
    return op, mp


def cyclic_group(cat, k, step, order):
    out = []
    for j in range(order):
        out.append(rotation(cat, k, (step * j) % k))
    return out


SPECS = {
    "a1": lambda: coxeter_a(1),
    "a2": lambda: coxeter_a(2),
    "a3": lambda: coxeter_a(3),
    "pts2": lambda: points_on_circle(2),
    "pts3": lambda: points_on_circle(3),
    "square": lambda: ArrangementSpec.from_dict(
        {"d": 2, "columns": [[1, 0], [0, 1]], "offsets": ["0", "0"]}),
    "det5": lambda: ArrangementSpec.from_dict(
        {"d": 2, "columns": [[2, 1], [1, 3]], "offsets": ["0", "1/3"]}),
}

_faces = {}
_models = {}


def faces_of(name):
    if name not in _faces:
        _faces[name] = toric_face_category(SPECS[name]())
    return _faces[name]


def model_of(name):
    if name not in _models:
        _models[name] = build_model(faces_of(name))
    return _models[name]


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("ELLARR_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "cache"))


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
