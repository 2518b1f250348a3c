import pytest

from onebit import build_filter, quantize, resume
from onebit.formats import (FormatError, dumps_bitstream, dumps_checkpoint, loads_bitstream,
                            loads_checkpoint, read_bitstream, write_bitstream)
from onebit.quantizer import SignSequence


def test_bitstream_round_trip(tmp_path):
    seq = quantize(build_filter(6, 0), None, 200)
    path = tmp_path / "q6.bits"
    write_bitstream(seq, path)
    back = read_bitstream(path)
    assert back.bits == seq.bits
    assert (back.sigma, back.mu, back.precision) == (6, 0.0, seq.precision)


def test_bitstream_layout():
    seq = SignSequence([1, -1] * 40, sigma=6, mu=0.0, precision=128)
    text = dumps_bitstream(seq)
    lines = text.splitlines()
    assert lines[:5] == ["#sigma=6", "#mu=0.0", "#precision=128", "#n=80", "#map=+1->1"]
    body = [ln for ln in lines if not ln.startswith("#")]
    assert [len(ln) for ln in body] == [64, 16]
    assert body[0] == "10" * 32


def test_bitstream_without_metadata():
    seq = loads_bitstream("1001\n0110\n")
    assert seq.to01() == "10010110"
    assert seq.sigma is None


def test_bitstream_rejects_garbage():
    with pytest.raises(FormatError):
        loads_bitstream("#n=2\n1x\n")
    with pytest.raises(FormatError):
        loads_bitstream("#n=3\n10\n")
    with pytest.raises(FormatError):
        loads_bitstream("#map=+1->0\n10\n")


def test_checkpoint_bit_exact():
    spec = build_filter(6, 0.05)
    seq = quantize(spec, None, 300)
    text = dumps_checkpoint(seq.state)
    back = loads_checkpoint(text)
    assert back.v_fixed == seq.state.v_fixed
    assert back.bits == seq.state.bits
    assert back.mu == 0.05
    assert dumps_checkpoint(back) == text


def test_checkpoint_resume(tmp_path):
    spec = build_filter(6, 0)
    first = quantize(spec, None, 500)
    path = tmp_path / "ck.txt"
    path.write_text(dumps_checkpoint(first.state))
    state = loads_checkpoint(path.read_text())
    assert resume(state, spec, None, 500).bits == quantize(spec, None, 1000).bits


def test_checkpoint_version_checked():
    text = dumps_checkpoint(quantize(build_filter(6, 0), None, 3).state)
    with pytest.raises(FormatError):
        loads_checkpoint(text.replace("#onebit-checkpoint=1", "#onebit-checkpoint=9"))


def test_checkpoint_count_checked():
    text = dumps_checkpoint(quantize(build_filter(6, 0), None, 3).state)
    with pytest.raises(FormatError):
        loads_checkpoint(text.replace("#n=3", "#n=4"))
