"""On-disk formats: the 0/1 bitstream and the quantizer checkpoint.

Bitstream::

    #sigma=6
    #mu=0
    #precision=128
    #n=50
    #map=+1->1
    1001010110101010010110100101010110100101101010010110...
    (64 symbols per line)

Checkpoint::

    #onebit-checkpoint=1
    #sigma=6
    #mu=0x0p+0
    #mantissa_bits=128
    #n=3
    #bits=100
    -0x100000000000000000000000000000000
    ...                              (one hex fixed-point residual per line)
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .quantizer import QuantizerState, SignSequence

LINE_WIDTH = 64
CHECKPOINT_VERSION = 1


class FormatError(ValueError):
    pass


def _mu_text(mu) -> str:
    if mu is None:
        return ""
    if isinstance(mu, float):
        return repr(mu)
    return str(mu)


def _parse_mu(text: str):
    if text == "":
        return None
    try:
        return float(text) if "/" not in text else Fraction(text)
    except ValueError as exc:
        raise FormatError(f"bad mu value {text!r}") from exc


def dumps_bitstream(seq: SignSequence) -> str:
    body = seq.to01()
    header = {
        "sigma": "" if seq.sigma is None else str(seq.sigma),
        "mu": _mu_text(seq.mu),
        "precision": "" if seq.precision is None else str(seq.precision),
        "n": str(len(seq)),
        "map": "+1->1",
    }
    if seq.description:
        header["input"] = seq.description
    lines = [f"#{k}={v}" for k, v in header.items()]
    lines += [body[i:i + LINE_WIDTH] for i in range(0, len(body), LINE_WIDTH)]
    return "\n".join(lines) + "\n"


def loads_bitstream(text: str) -> SignSequence:
    meta: dict[str, str] = {}
    chunks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep:
                raise FormatError(f"line {lineno}: header without '='")
            meta[key.strip()] = value.strip()
            continue
        if set(line) - {"0", "1"}:
            raise FormatError(f"line {lineno}: bitstream lines may only hold 0/1")
        chunks.append(line)
    if meta.get("map", "+1->1") != "+1->1":
        raise FormatError(f"unsupported symbol map {meta['map']!r}")
    body = "".join(chunks)
    if "n" in meta and int(meta["n"]) != len(body):
        raise FormatError(f"header says n={meta['n']} but {len(body)} symbols found")
    return SignSequence.from01(
        body,
        sigma=int(meta["sigma"]) if meta.get("sigma") else None,
        mu=_parse_mu(meta.get("mu", "")),
        precision=int(meta["precision"]) if meta.get("precision") else None,
        description=meta.get("input", ""),
    )


def write_bitstream(seq: SignSequence, path) -> None:
    Path(path).write_text(dumps_bitstream(seq))


def read_bitstream(path) -> SignSequence:
    return loads_bitstream(Path(path).read_text())


def dumps_checkpoint(state: QuantizerState) -> str:
    mu = state.mu
    mu_repr = mu.hex() if isinstance(mu, float) else str(Fraction(mu))
    lines = [
        f"#onebit-checkpoint={CHECKPOINT_VERSION}",
        f"#sigma={state.sigma}",
        f"#mu={mu_repr}",
        f"#mantissa_bits={state.precision}",
        f"#n={state.n}",
        "#bits=" + "".join("1" if b > 0 else "0" for b in state.bits),
        f"#max_abs_w={state.max_abs_w:#x}",
        f"#max_abs_v={state.max_abs_v:#x}",
    ]
    lines += [f"{v:#x}" for v in state.v_fixed]
    return "\n".join(lines) + "\n"


def loads_checkpoint(text: str) -> QuantizerState:
    meta: dict[str, str] = {}
    values = []
    for raw in text.splitlines():
        if raw.startswith("#"):
            key, _, value = raw[1:].partition("=")
            meta[key] = value
        elif raw.strip():
            values.append(int(raw.strip(), 16))
    version = meta.get("onebit-checkpoint")
    if version != str(CHECKPOINT_VERSION):
        raise FormatError(f"unsupported checkpoint version {version!r}")
    mu_text = meta["mu"]
    mu = float.fromhex(mu_text) if "0x" in mu_text else Fraction(mu_text)
    bits = [1 if ch == "1" else -1 for ch in meta.get("bits", "")]
    n = int(meta["n"])
    if len(values) != n or len(bits) != n:
        raise FormatError(f"checkpoint declares n={n}, holds {len(values)} residuals "
                          f"and {len(bits)} bits")
    return QuantizerState(
        sigma=int(meta["sigma"]), mu=mu, precision=int(meta["mantissa_bits"]),
        v_fixed=values, bits=bits,
        max_abs_w=int(meta.get("max_abs_w", "0x0"), 16),
        max_abs_v=int(meta.get("max_abs_v", "0x0"), 16),
    )


def write_checkpoint(state: QuantizerState, path) -> None:
    Path(path).write_text(dumps_checkpoint(state))


def read_checkpoint(path) -> QuantizerState:
    return loads_checkpoint(Path(path).read_text())
