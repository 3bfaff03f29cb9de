import json

import numpy as np
import pytest

import nordenkit as nk


def test_canonical_structures():
    s = nk.NordenStructure.canonical(2)
    assert s.dim == 4
    assert np.allclose(s.J @ s.J, -np.eye(4))
    o = nk.ContactBStructure.canonical(2)
    assert o.dim == 5
    assert o.eta @ o.xi == pytest.approx(1.0)


def test_round_trip_even_and_odd():
    for s in (nk.sample_norden(3, seed=1), nk.sample_contact_b(2, seed=1)):
        cls = "W1+W2+W3" if isinstance(s, nk.NordenStructure) else "F1+F2+F5+F11"
        F = nk.sample_F(s, cls, seed=2)
        N, N_hat = nk.nijenhuis(F, s)
        back = nk.F_from_nijenhuis(N, N_hat, s)
        assert np.linalg.norm(back - F) < 1e-9 * np.linalg.norm(F)


def test_classify_and_kt_precondition():
    s = nk.sample_contact_b(2, seed=3)
    F = nk.sample_F(s, "F5", seed=4)
    assert nk.classify(F, s) == "F5"
    with pytest.raises(nk.NordenkitError) as info:
        nk.connection(F, s, "kt")
    assert info.value.args[0] == "ClassPrecondition"


def test_kt_torsion_is_totally_skew():
    s = nk.sample_norden(2, seed=5)
    F = nk.sample_F(s, "W3", seed=6)
    T = nk.connection(F, s, "kt")["torsion"]
    assert np.abs(T + T.transpose(0, 2, 1)).max() < 1e-10 * np.abs(T).max()


def test_invalid_structure_raises():
    with pytest.raises(nk.NordenkitError) as info:
        nk.NordenStructure(np.eye(4), np.eye(4))
    assert info.value.args[0] == "AxiomViolation"


def test_cli_roundtrip():
    code, out, _ = nk.run_cli(["sample", "--class", "W2", "--seed", "9"])
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "even-point"
    code, out, err = nk.run_cli(["selftest", "--samples", "4", "--n", "2", "--format", "json"])
    assert code == 0, err
    assert json.loads(out)["summary"]["failed"] == 0
