import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rmclearn.cli import bundled_models_dir
from rmclearn.modelio import compile_model, parse_model_doc

MODEL_NAMES = (
    "herman_linear",
    "herman_ring",
    "israeli_jalfon",
    "token_passing_linear",
    "token_passing_ring",
    "herman_unsafe_demo",
)

SAFE_MODELS = MODEL_NAMES[:-1]


def model_path(name: str) -> Path:
    return bundled_models_dir() / f"{name}.rmc"


@pytest.fixture(scope="session")
def model_docs():
    return {
        name: parse_model_doc(model_path(name).read_text(encoding="utf-8"))
        for name in MODEL_NAMES
    }


@pytest.fixture(scope="session")
def problems(model_docs):
    return {name: compile_model(doc) for name, doc in model_docs.items()}
