import functools
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gatlas.atlas import build_single_domain  # noqa: E402
from gatlas.catalog import FAMILIES  # noqa: E402
from gatlas.complexes import (are_contiguous, barycentric_subdivision, dowker_pair, dowker_phi,  # noqa: E402
                              dowker_psi, dowker_psi_bar, nerve_complex, subdivide_map,
                              vietoris_complex)

FIXTURES = Path(__file__).parent / "fixtures"


@functools.lru_cache(maxsize=None)
def family(name):
    return FAMILIES[name]()


@functools.lru_cache(maxsize=None)
def atlas(name):
    G, fam = family(name)
    return build_single_domain(G, fam)


@functools.lru_cache(maxsize=None)
def nerve(name):
    return nerve_complex(atlas(name))


@functools.lru_cache(maxsize=None)
def vietoris(name):
    return vietoris_complex(atlas(name))


@pytest.fixture(params=sorted(FAMILIES))
def fixture_name(request):
    return request.param


ATLAS_FIXTURES = ("s3", "s3_transpositions", "k4", "q8", "s4", "s3_trivial", "gl2_z2", "gl2_z4")


@functools.lru_cache(maxsize=None)
def fixture_atlas(stem):
    from gatlas.cli import load_atlas

    return load_atlas(json.loads((FIXTURES / f"{stem}.json").read_text()))


def load_fixture(stem):
    return json.loads((FIXTURES / f"{stem}.json").read_text())


def explicit_dowker_contiguity(R):
    """phi phi' and psi psi-bar' built as maps on Sd^2 K_R, then compared."""
    K, L = dowker_pair(R)
    S1 = barycentric_subdivision(K)
    S2 = barycentric_subdivision(S1)
    phi = dowker_phi(K, subdivision=S1)
    phi2 = dowker_phi(S1, subdivision=S2)
    SL = barycentric_subdivision(L)
    psibar = dowker_psi_bar(R, pair=(K, L), subdivision=S1)
    psibar_sd = subdivide_map(psibar, S2, SL)
    psi = dowker_psi(R, pair=(K, L), subdivision=SL)
    return are_contiguous(phi.compose_after(phi2), psi.compose_after(psibar_sd))


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
