import json
import random

import pytest
from hypothesis import strategies as st

from relog.formula import And, Box, BoxL, Imp, Neg, Or, Var
from relog.search import enumerate_models, random_models
from relog.structures import load_model

ONE_STATE = {
    "states": ["s"],
    "leq": [["s", "s"]],
    "star": {"s": "s"},
    "R": [["s", "s", "s"]],
    "Q": [],
    "QL": [],
    "designation": {"kind": "L", "set": ["s"]},
    "valuation": {"p": ["s"]},
}


@pytest.fixture
def one_state_doc():
    return json.loads(json.dumps(ONE_STATE))


@pytest.fixture
def one_state(one_state_doc):
    return load_model(one_state_doc)


@pytest.fixture
def write_json(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return write


def small_models(kind="L", logic="BM.C", variables=("p", "q"), per_size=15, seed=7,
                 sizes=None):
    """A reproducible mix of canonical-order and random models."""
    rng = random.Random(seed)
    sizes = sizes or ((1, 2, 3) if kind == "L" else (3, 4))
    out = []
    for n in sizes:
        stream = enumerate_models(n, logic, kind, variables, limit=per_size)
        out += list(stream)
        out += random_models(n, logic, kind, variables, per_size, rng)
    return out


names = st.sampled_from(["p", "q", "r", "x1", "long_name"])


def formulas(max_leaves=12):
    return st.recursive(
        names.map(Var),
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
            st.tuples(sub, sub).map(lambda t: Imp(*t)),
            sub.map(Neg), sub.map(Box), sub.map(BoxL),
        ),
        max_leaves=max_leaves,
    )
