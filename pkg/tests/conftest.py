import json
from importlib import resources

import pytest

from briefcanvas.constraints import constraint_set_from_mapping


@pytest.fixture(scope="session")
def sample_briefs():
    """The five bundled evaluation briefs as ConstraintSets."""
    text = resources.files("briefcanvas").joinpath("data/sample_briefs.json").read_text("utf-8")
    return [constraint_set_from_mapping(doc) for doc in json.loads(text)]
