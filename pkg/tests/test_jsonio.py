import json

import numpy as np
import pytest

from freespec import jsonio
from freespec.autanalysis import AutJet
from freespec.errors import FreespecError
from freespec.freefun import PowerSeries
from freespec.freesets import Region, classify
from freespec.linalg import random_complex


def test_matrix_round_trip(rng):
    M = random_complex((3, 2), rng)
    out = jsonio.decode_matrix(json.loads(json.dumps(jsonio.encode_matrix(M))))
    np.testing.assert_array_equal(out, M)


def test_tuple_round_trip(rng):
    X = random_complex((2, 3, 3), rng)
    np.testing.assert_array_equal(jsonio.decode_tuple(jsonio.encode_tuple(X)), X)


def test_context_round_trip(ctx):
    back = jsonio.decode_context(jsonio.encode_context(ctx))
    np.testing.assert_allclose(back.C1, ctx.C1)
    np.testing.assert_allclose(back.C2, ctx.C2)


def test_series_round_trip():
    F = PowerSeries(2, {(): 1.0, (1, 2): 2.0 - 1j}, 3)
    back = jsonio.decode_series(jsonio.encode_series(F))
    assert back.trunc == 3 and set(back.coeffs) == {(), (1, 2)}
    assert back.coeff((1, 2))[0, 0] == 2.0 - 1j


def test_jet_round_trip():
    jet = AutJet([0.1j, 0.0], [[0, 1j], [1, 0]])
    back = jsonio.decode_jet(jsonio.encode_jet(jet))
    np.testing.assert_array_equal(back.b, jet.b)
    np.testing.assert_array_equal(back.L, jet.L)


def test_malformed_inputs():
    with pytest.raises(FreespecError):
        jsonio.decode_matrix({"rows": 2, "cols": 2, "data": [[1, 0]]})
    with pytest.raises(FreespecError):
        jsonio.decode_tuple({"g": 3, "entries": [jsonio.encode_matrix(np.eye(2))]})
    with pytest.raises(FreespecError):
        jsonio.decode_context({"s": 3, "C1": jsonio.encode_matrix(np.eye(2)), "C2": jsonio.encode_matrix(np.eye(2))})


def test_dumps_is_canonical():
    report = {"b": np.float64(1.5), "a": classify(0.5), "c": np.array([[1 + 1j]]), "d": np.bool_(True)}
    text = jsonio.dumps(report)
    assert text == jsonio.dumps(dict(reversed(list(report.items()))))
    obj = json.loads(text)
    assert obj["a"] == {"region": Region.INSIDE.value, "margin": 0.5}
    assert obj["d"] is True
