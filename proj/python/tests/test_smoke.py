"""Smoke tests for the shpsim extension module."""

import random

import pytest

shpsim = pytest.importorskip("shpsim")


def test_module_surface():
    assert shpsim.__version__
    assert shpsim.hamming_parity_count(8) == 4
    assert shpsim.caf(4) == 4.0
    assert shpsim.expected_attempts(8) == 256.0
    assert abs(shpsim.expected_bits_per_attempt(2) - 0.5) < 1e-12


def test_rounding_and_classify():
    assert abs(shpsim.round_epsilon(2.345678, 4) - 2.3456) < 1e-9
    pdu = shpsim.PduRecord()
    pdu.dst_mac = "ff:ff:ff:ff:ff:ff"
    pdu.ether_type = "ipv4"
    pdu.length = 60
    assert shpsim.classify_poi(pdu, "broadcast_domain")
    pdu.dst_mac = "02:00:00:00:00:09"
    assert not shpsim.classify_poi(pdu, "broadcast_domain")
    assert shpsim.classify_poi(pdu, "all")


def test_deskew_matches_hashlib_oracle():
    # Same canonical encoding as tests/oracle/hash_vectors.py.
    import hashlib
    import struct

    def oracle(value, subchannel, key, n, iteration):
        msg = (
            struct.pack(">I", len(key))
            + key
            + b"dk"
            + struct.pack(">q", value)
            + struct.pack(">II", subchannel, iteration)
        )
        digest = hashlib.sha256(msg).digest()
        return "".join(str((digest[i // 8] >> (7 - i % 8)) & 1) for i in range(n))

    for value, sub, n, it in [(2345600, 0, 8, 0), (17, 3, 13, 2), (0, 0, 16, 0)]:
        assert shpsim.deskew_bits(value, sub, "test", n, it) == oracle(
            value, sub, b"test", n, it
        )


def test_ecc_roundtrip():
    cw = shpsim.encode_fragment("1011", "hamming+")
    data, status, _pos = shpsim.decode_fragment(cw, 4, "hamming+")
    assert data == "1011" and status == "ok"
    flipped = ("1" if cw[0] == "0" else "0") + cw[1:]
    data, status, pos = shpsim.decode_fragment(flipped, 4, "hamming+")
    assert data == "1011" and status == "corrected" and pos == 1
    assert len(shpsim.inline_expand("10110110", 4)) == 16


def test_synthetic_trace_and_session():
    trace = shpsim.generate_synthetic_trace(rate_pps=120, duration_s=30, seed=7)
    assert 30 * 120 * 0.9 < len(trace) < 30 * 120 * 1.1

    cfg = shpsim.ChannelConfig()
    cfg.inputsource = "icd"
    cfg.bitlength = 4
    cfg.epsilon_places = 3
    message = "".join(random.Random(5).choice("01") for _ in range(64))
    out = shpsim.run_session(cfg, trace, message_bits=message)
    rep = out["report"]
    assert rep["message_bits_delivered"] == 64
    assert rep["fragments_failed"] == 0
    assert rep["message_exact"]
    assert out["message"] == message


def test_session_determinism_and_impairment():
    trace = shpsim.generate_synthetic_trace(duration_s=20, seed=11)
    cfg = shpsim.ChannelConfig()
    cfg.inputsource = "isd"
    cfg.bitlength = 2
    cfg.epsilon_places = 3
    rx = shpsim.ImpairmentConfig()
    rx.loss = 0.1
    rx.seed = 3
    msg = "10" * 32
    a = shpsim.run_session(cfg, trace, receiver_impair=rx, message_bits=msg)
    b = shpsim.run_session(cfg, trace, receiver_impair=rx, message_bits=msg)
    assert a["report"] == b["report"]
    rep = a["report"]
    assert (
        rep["fragments_ok"] + rep["fragments_corrected"] + rep["fragments_failed"] + rep["retries"]
        == rep["n_pr"]
    )


def test_analysis_functions():
    assert abs(shpsim.shannon_entropy([0, 1, 2, 3]) - 2.0) < 1e-12
    d, p = shpsim.ks_two_sample([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    assert abs(d - 1.0 / 3.0) < 1e-12
    assert 0 < p <= 1
    points, auc = shpsim.roc_auc([0.9, 0.4], [0.5, 0.1])
    assert abs(auc - 0.75) < 1e-12
    assert points[0] == (0.0, 0.0) and points[-1] == (1.0, 1.0)
    gas = shpsim.gas_discretize([1.0, 3.0, 2.0, 2.5])
    assert list(gas["symbols"]) == [3, 12]

    kappas = shpsim.compressibility_windows([0.008333] * 2000, window=1000)
    assert len(kappas) == 2 and all(k > 0.9 for k in kappas)


def test_markov_model():
    model = shpsim.MarkovModel(1, 1.0)
    stream = [i % 16 for i in range(50000)]
    model.train(stream)
    assert model.surprisal_bits(stream) < 4.0
    windows = model.score_windows(stream, 1000)
    assert len(windows) == 50


def test_trace_io_roundtrip(tmp_path):
    trace = shpsim.generate_synthetic_trace(duration_s=5, seed=13)
    path = str(tmp_path / "t.csv")
    shpsim.save_trace_csv(trace, path)
    back = shpsim.load_trace(path)
    assert len(back) == len(trace)
    assert back.records[0].src_mac == trace.records[0].src_mac
    assert back.records[-1].timestamp == trace.records[-1].timestamp


def test_search_smoke():
    results = shpsim.run_search(budget=8, seed=3, population=8, duration_s=6.0, message_bits=64)
    assert len(results) == 8
    fits = [r["fitness"] for r in results]
    assert fits == sorted(fits, reverse=True)
