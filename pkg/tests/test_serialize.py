import json

import numpy as np
import pytest

from conftest import gid
from stabforge import serialize as ser
from stabforge.errors import GroupSpecError, IsotropicError, NotStabilizerGroupError
from stabforge.groups import make_group
from stabforge.stabilizer import enumerate_states, sstate_synthesize
from stabforge.weyl import WaveFunction, random_density, random_wavefunction


def rt(obj):
    return json.loads(ser.dumps(obj))


@pytest.mark.parametrize("orders", [(2,), (3,), (4,), (2, 2), (6,), (2, 4)], ids=gid)
def test_stabilizer_group_round_trip(orders):
    A = make_group(orders)
    for r in enumerate_states(A):
        data = rt(ser.stabilizer_group_to_json(r.group))
        assert data["group"] == str(A)
        assert ser.stabilizer_group_from_json(data) == r.group


@pytest.mark.parametrize("orders", [(2,), (3,), (2, 2), (4, 2)], ids=gid)
def test_exact_wavefunction_round_trip(orders):
    A = make_group(orders)
    for r in enumerate_states(A):
        phi = sstate_synthesize(r.descriptor)
        back = ser.wavefunction_from_json(rt(ser.wavefunction_to_json(phi)))
        assert back.exact == phi.exact
        assert np.array_equal(back.amplitudes, phi.amplitudes)


def test_dense_round_trips(rng):
    A = make_group([3, 2])
    phi = random_wavefunction(A, rng)
    back = ser.wavefunction_from_json(rt(ser.wavefunction_to_json(phi)))
    assert back.exact is None and np.array_equal(back.amplitudes, phi.amplitudes)
    rho = random_density(A, rng)
    back = ser.density_from_json(rt(ser.density_to_json(rho)))
    assert np.array_equal(back.matrix, rho.matrix)
    # a wave function file is read as a pure density
    pure = ser.density_from_json(rt(ser.wavefunction_to_json(phi)))
    assert np.allclose(pure.matrix, np.outer(phi.amplitudes, phi.amplitudes.conj()))


def test_reader_accepts_integer_lists_and_real_amplitudes():
    data = {"group": "Z2", "coset": {"y": [0], "H": [[1], [0]]}, "phases": [3, 0], "scale": 0.5**0.5}
    phi = ser.wavefunction_from_json(data)
    assert np.allclose(phi.amplitudes, np.array([1, -1j]) / np.sqrt(2))
    phi = ser.wavefunction_from_json({"group": "Z2", "amplitudes": [1, 0]})
    assert np.array_equal(phi.amplitudes, [1, 0])


@pytest.mark.parametrize("data", [
    {"amplitudes": [1, 0]},
    {"group": "Z2"},
    {"group": "Z2", "amplitudes": [1, 0, 0]},
    {"group": "Z2", "amplitudes": [[1, 2, 3], 0]},
    {"group": "Z4", "coset": {"y": "(0)", "H": ["(0)", "(1)"]}, "phases": [0, 0], "scale": 1},
    {"group": "Z2", "coset": {"y": "(0)", "H": ["(0)", "(1)"]}, "phases": [0], "scale": 1},
])
def test_wavefunction_reader_errors(data):
    with pytest.raises(GroupSpecError):
        ser.wavefunction_from_json(data)


def test_stabilizer_group_reader_errors():
    base = {"group": "Z2", "K": {"elements": [["(0)", "(0)"], ["(0)", "(1)"]]}, "alpha": [0, 0]}
    ser.stabilizer_group_from_json(base)
    with pytest.raises(NotStabilizerGroupError):
        ser.stabilizer_group_from_json({**base, "alpha": [0]})
    with pytest.raises(NotStabilizerGroupError):
        ser.stabilizer_group_from_json({**base, "alpha": [1, 0]})
    with pytest.raises(NotStabilizerGroupError):
        ser.stabilizer_group_from_json({"group": "Z2", "alpha": [0, 0]})
    with pytest.raises(NotStabilizerGroupError):
        ser.stabilizer_group_from_json({**base, "K": {"elements": [["(0)", "(0)"], ["(0)", "(0)"]]}})
    with pytest.raises(IsotropicError):
        ser.stabilizer_group_from_json({**base, "K": {"elements": [["(0)", "(0)"], ["(1)", "(1)"], ["(1)", "(0)"],
                                                                   ["(0)", "(1)"]]}, "alpha": [0, 0, 0, 0]})


def test_dumps_is_stable_and_normalizes_negative_zero():
    phi = WaveFunction(make_group([2]), np.array([-0.0 + 0j, 1 - 0j]))
    s = ser.dumps(ser.wavefunction_to_json(phi))
    assert "-0.0" not in s
    assert s == ser.dumps(ser.wavefunction_to_json(phi))


def test_sweep_csv_columns():
    csv = ser.sweep_to_csv([{"state-id": "stab-0", "G-id": "t", "entropy": 0.5, "gap": -0.0}])
    lines = csv.splitlines()
    assert lines[0] == "state-id,G-id,entropy,gap"
    assert lines[1] == "stab-0,t,0.5,0.0"


def test_state_to_json_shape():
    rec = enumerate_states(make_group([2]))[0]
    obj = rt(ser.state_to_json(rec))
    assert set(obj) == {"moduli", "group", "wavefunction"}
    assert set(obj["moduli"]) == {"H", "y", "h"}
