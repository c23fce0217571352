"""The shipped fixtures load, validate, check clean, and regenerate
byte-identically from their builders."""

import pathlib

import pytest

from subfib.cli import main as cli
from subfib.gcwf import check_gcwf, check_sigma_faithful
from subfib.modelio import canonical_dumps, encode_model, load_model

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

BUILDERS = {
    "finset2.json": ["build", "finset", "--n", "2"],
    "kernel_pair_finset1.json": ["build", "kernel-pair", "--n", "1"],
    "subobject2.json": ["build", "subobject", "--n", "2"],
}


@pytest.mark.parametrize("fname", sorted(BUILDERS))
def test_fixture_roundtrip_and_checks(fname):
    path = FIXTURES / fname
    mf = load_model(str(path))
    raw = path.read_bytes()
    assert canonical_dumps(encode_model(mf)).encode() == raw
    for G in mf.gcwfs.values():
        assert check_gcwf(G).passed
        assert check_sigma_faithful(G).passed


@pytest.mark.parametrize("fname", sorted(BUILDERS))
def test_fixture_regenerates_identically(fname, tmp_path):
    out = tmp_path / fname
    assert cli(BUILDERS[fname] + ["-o", str(out)]) == 0
    assert out.read_bytes() == (FIXTURES / fname).read_bytes()
