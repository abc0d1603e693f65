"""Reading and writing process matrices as text files.

Two interchangeable encodings. The dense form is a JSON document with the
dimension, the subsystem labels, and the matrix as a row-major list of
[real, imag] pairs. The sparse form lists one Pauli word per line with
its coefficient ("IZZI 0.25"), where the four letters follow the fixed
subsystem order A_I, A_O, B_I, B_O and the coefficient convention matches
the Hilbert-Schmidt decomposition (coefficient = Tr[W sigma] / 16).
Lines starting with '#' are comments; a "# tag:" comment carries the
provenance tag that the dense form stores as a field. Format detection:
a document whose first non-space character is '{' is dense JSON,
anything else is parsed as Pauli text.
"""

from __future__ import annotations

import json

import numpy as np

from .processes import ProcessMatrix
from .tensor import DEFAULT_LAYOUT, PAULI_LABELS, pauli_compose, pauli_decompose

_WORD_INDEX = {letter: index for index, letter in enumerate(PAULI_LABELS)}


def dense_text(w: ProcessMatrix) -> str:
    """Serialize as the dense JSON document, ending with a newline."""
    entries = [[float(z.real), float(z.imag)] for z in w.matrix.ravel()]
    document = {
        "dimension": w.dim,
        "layout": list(w.layout.labels),
        "tag": w.tag,
        "entries": entries,
    }
    return json.dumps(document, indent=None, separators=(",", ":")) + "\n"


def pauli_text(w: ProcessMatrix, zero_atol: float = 0.0) -> str:
    """Serialize as Pauli-word lines.

    Exact zeros are always omitted; ``zero_atol`` additionally drops
    coefficients at or below it, which is useful for pruning the
    last-ulp dust that Hilbert-Schmidt coefficients of composed
    matrices carry.
    """
    coefficients = pauli_decompose(w.matrix, w.layout, zero_atol=zero_atol)
    lines = []
    if w.tag:
        lines.append(f"# tag: {w.tag}")
    for word in sorted(coefficients):
        label = "".join(PAULI_LABELS[i] for i in word)
        lines.append(f"{label} {coefficients[word]!r}")
    return "\n".join(lines) + "\n"


def _parse_dense(text: str) -> ProcessMatrix:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed dense process file: {exc}") from exc
    if not isinstance(document, dict):
        raise ValueError("dense process file must be a JSON object")
    for key in ("dimension", "layout", "entries"):
        if key not in document:
            raise ValueError(f"dense process file missing key {key!r}")
    labels = tuple(document["layout"])
    if labels != DEFAULT_LAYOUT.labels:
        raise ValueError(
            f"unsupported layout {labels!r}, expected {DEFAULT_LAYOUT.labels!r}"
        )
    dim = document["dimension"]
    if dim != DEFAULT_LAYOUT.dim:
        raise ValueError(f"dimension must be {DEFAULT_LAYOUT.dim}, got {dim!r}")
    entries = document["entries"]
    if len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {len(entries)}")
    flat = np.empty(dim * dim, dtype=complex)
    for pos, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"entry {pos} is not a [real, imag] pair: {pair!r}")
        flat[pos] = complex(float(pair[0]), float(pair[1]))
    tag = document.get("tag", "")
    if not isinstance(tag, str):
        raise ValueError(f"tag must be a string, got {tag!r}")
    return ProcessMatrix(matrix=flat.reshape(dim, dim), tag=tag)


def _parse_pauli(text: str) -> ProcessMatrix:
    coefficients: dict[tuple[int, ...], float] = {}
    tag = ""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("tag:") and not tag:
                tag = comment[4:].strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {number}: expected 'WORD coefficient', got {raw!r}")
        label, value = parts
        if len(label) != 4 or any(ch not in _WORD_INDEX for ch in label):
            raise ValueError(
                f"line {number}: Pauli word must be 4 characters over {PAULI_LABELS}, got {label!r}"
            )
        word = tuple(_WORD_INDEX[ch] for ch in label)
        if word in coefficients:
            raise ValueError(f"line {number}: duplicate Pauli word {label}")
        try:
            coefficients[word] = float(value)
        except ValueError as exc:
            raise ValueError(f"line {number}: bad coefficient {value!r}") from exc
    if not coefficients:
        raise ValueError("process file contains no Pauli terms")
    return ProcessMatrix(matrix=pauli_compose(coefficients), tag=tag)


def parse_process(text: str) -> ProcessMatrix:
    """Parse either encoding, detected from the first non-space character."""
    stripped = text.lstrip()
    if not stripped:
        raise ValueError("empty process file")
    if stripped.startswith("{"):
        return _parse_dense(stripped)
    return _parse_pauli(text)


def read_process(path) -> ProcessMatrix:
    with open(path, encoding="utf-8") as handle:
        return parse_process(handle.read())


def write_process(w: ProcessMatrix, path, form: str = "dense") -> None:
    if form == "dense":
        text = dense_text(w)
    elif form == "pauli":
        text = pauli_text(w)
    else:
        raise ValueError(f"unknown format {form!r}, expected 'dense' or 'pauli'")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
