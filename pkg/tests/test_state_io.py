import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entgauge.decompositions import slater_rank
from entgauge.errors import (
    InvalidArgument,
    InvariantViolation,
    LengthMismatch,
    ParseError,
    StateFileError,
    TraceInvalid,
    VersionMismatch,
)
from entgauge.norm import Budget, VSetSpec
from entgauge.state_io import (
    FORMAT_VERSION,
    GENERATORS,
    format_state,
    generate,
    make_manifest,
    parse_state_text,
    read_state,
    write_state,
)
from entgauge.tensor_core import DensityFunctional, PureState, wedge

from conftest import basis

SINGLET_AMPS = np.array([0, 1, -1, 0]) / math.sqrt(2)


def _file(kind, k, n, rows, version=1):
    lines = [f"format_version {version}", f"kind {kind}", f"parties {k}", f"local_dim {n}", "data"]
    lines += [f"{float(z.real)!r} {float(z.imag)!r}" for z in rows]
    return "\n".join(lines + ["end"]) + "\n"


def test_read_singlet_file(tmp_path):
    p = tmp_path / "singlet.state"
    p.write_text("# singlet\n" + _file("pure", 2, 2, SINGLET_AMPS.astype(complex)))
    s = read_state(p)
    e = basis(2)
    assert isinstance(s, PureState)
    assert np.allclose(s.amplitudes, wedge([e[0], e[1]]), atol=1e-15)


def test_trace_invalid(tmp_path):
    rho = np.diag([0.5, 0.4, 0.0, 0.0]).astype(complex)
    p = tmp_path / "bad.state"
    p.write_text(_file("mixed", 2, 2, rho.reshape(-1)))
    with pytest.raises(TraceInvalid) as info:
        read_state(p)
    assert info.value.field == "data"


def test_length_mismatch():
    with pytest.raises(LengthMismatch) as info:
        parse_state_text(_file("pure", 2, 2, np.array([1, 0, 0], dtype=complex)))
    assert info.value.line == 5


def test_version_mismatch():
    with pytest.raises(VersionMismatch) as info:
        parse_state_text(_file("pure", 2, 2, SINGLET_AMPS.astype(complex), version=2))
    assert info.value.line == 1 and info.value.field == "format_version"


@pytest.mark.parametrize("text,field", [
    ("kind pure\nparties 2\nlocal_dim 2\ndata\nend\n", "format_version"),
    ("format_version 1\nkind solid\n", "kind"),
    ("format_version 1\nkind pure\nparties two\n", "parties"),
    ("format_version 1\nbogus 3\n", "bogus"),
    ("format_version 1\nkind pure\nparties 1\nlocal_dim 2\ndata\n1 0 0\nend\n", "data"),
    ("format_version 1\nkind pure\nparties 1\nlocal_dim 2\ndata\n1 0\n0 0\n", "data"),
])
def test_parse_errors_carry_field(text, field):
    with pytest.raises(ParseError) as info:
        parse_state_text(text)
    assert info.value.field == field


def test_invariant_violation_on_unnormalised_pure():
    sf = parse_state_text(_file("pure", 1, 2, np.array([1, 1], dtype=complex)))
    with pytest.raises(InvariantViolation):
        sf.to_state()


def test_not_utf8(tmp_path):
    p = tmp_path / "junk.state"
    p.write_bytes(b"\xff\xfe\x00format")
    with pytest.raises(ParseError):
        read_state(p)


def test_round_trips(tmp_path):
    s = generate("singlet")
    write_state(s, tmp_path / "s.state", {"generator": "singlet"})
    back = read_state(tmp_path / "s.state")
    assert np.array_equal(back.amplitudes, s.amplitudes)
    rng = np.random.default_rng(0)
    for _ in range(5):
        rho = generate("mixed_sector", {"n": 3, "k": 2, "sector": "full"}, rng)
        write_state(rho, tmp_path / "m.state")
        back = read_state(tmp_path / "m.state")
        assert np.max(np.abs(np.asarray(back.matrix) - np.asarray(rho.matrix))) <= 1e-15
    text = (tmp_path / "m.state").read_text()
    assert text.startswith(f"format_version {FORMAT_VERSION}\n")


def test_metadata_is_kept_and_validated():
    text = format_state(generate("singlet"), {"seed": 3, "generator": "singlet"})
    assert parse_state_text(text).metadata == {"generator": "singlet", "seed": "3"}
    with pytest.raises(InvalidArgument):
        format_state(generate("singlet"), {"bad key": 1})


def test_write_leaves_no_temp_files(tmp_path):
    write_state(generate("singlet"), tmp_path / "a.state")
    assert [p.name for p in tmp_path.iterdir()] == ["a.state"]


@settings(max_examples=200)
@given(st.binary(max_size=400))
def test_fuzzed_bytes_never_crash(data):
    try:
        sf = parse_state_text(data.decode("utf-8", errors="replace"))
        sf.to_state()
    except StateFileError:
        pass


@settings(max_examples=200)
@given(st.lists(st.sampled_from([
    "format_version 1", "format_version 7", "kind pure", "kind mixed", "parties 1",
    "parties 2", "local_dim 2", "local_dim 99", "data", "end", "1 0", "0 0",
    "0.5 0.5", "nan 0", "inf 1", "meta a b", "# note", "",
]), max_size=14))
def test_fuzzed_structure_never_crashes(lines):
    try:
        parse_state_text("\n".join(lines)).to_state()
    except StateFileError:
        pass


# --- generators ----------------------------------------------------------


def test_generator_examples():
    assert np.allclose(generate("singlet").amplitudes, SINGLET_AMPS)
    xi = generate("xi_k", {"k": 2, "n": 4})
    e = basis(4)
    expected = (wedge([e[0], e[1]]) + wedge([e[2], e[3]])) / math.sqrt(2)
    assert np.allclose(xi.amplitudes, expected)
    assert slater_rank(xi) == 2
    tr = generate("tracial_wedge", {"n": 3, "k": 2})
    assert isinstance(tr, DensityFunctional)
    assert np.trace(tr.matrix).real == pytest.approx(1)
    target = sum(np.outer(w, w.conj()) for w in
                 (wedge([basis(3)[i], basis(3)[j]]) for i, j in ((0, 1), (0, 2), (1, 2)))) / 3
    assert np.allclose(tr.matrix, target)


def test_generator_rejects_bad_params():
    with pytest.raises(InvalidArgument):
        generate("xi_k", {"k": 3, "n": 4})
    with pytest.raises(InvalidArgument):
        generate("nope")
    with pytest.raises(InvalidArgument):
        generate("haar_pure", {"n": "x"})
    with pytest.raises(InvalidArgument):
        generate("tracial_wedge", {"n": 2, "k": 3})


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generators_are_deterministic(name, tmp_path):
    params = {"xi_k": {"k": 1, "n": 2}}.get(name, {})
    a = format_state(generate(name, params, 42), {"seed": 42})
    b = format_state(generate(name, params, 42), {"seed": 42})
    assert a == b
    write_state(generate(name, params, 42), tmp_path / "a.state")
    write_state(generate(name, params, 42), tmp_path / "b.state")
    assert (tmp_path / "a.state").read_bytes() == (tmp_path / "b.state").read_bytes()


def test_seeds_differ():
    a = generate("haar_pure", {"n": 3}, 1).amplitudes
    b = generate("haar_pure", {"n": 3}, 2).amplitudes
    assert not np.allclose(a, b)


def test_manifest_echoes_inputs():
    m = make_manifest(5, Budget(seed=5), VSetSpec(2, 2), started=0.0)
    d = m.as_dict()
    assert d["seed"] == 5 and d["budget"]["seed"] == 5
    assert d["spec"]["family"] == "tensor"
    assert d["version"] and d["wall_time"] >= 0
