"""Text state files, canonical state generators and run manifests.

File layout (one token group per line, ``#`` starts a comment)::

    format_version 1
    kind pure | mixed
    parties K
    local_dim N
    meta KEY VALUE        (any number, optional)
    data
    RE IM                 (N**K lines for pure, N**(2K) for mixed, row-major)
    end

Multi-indices are row-major: amplitude index i_1 ... i_k maps to
sum_m i_m n**(k-1-m), the same ordering as ``numpy.reshape``.  Numbers are
written with 17 significant digits so a round-trip is exact in double
precision.
"""

from __future__ import annotations

import math
import os
import platform
import tempfile
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import (
    InvalidArgument,
    InvariantViolation,
    LengthMismatch,
    ParseError,
    TraceInvalid,
    VersionMismatch,
)
from .tensor_core import (
    DENSITY_TOL,
    UNIT_TOL,
    DensityFunctional,
    PureState,
    product_vector,
    random_unit_vector,
    sector_basis,
    wedge,
)

FORMAT_VERSION = 1
_HEADER_FIELDS = ("format_version", "kind", "parties", "local_dim")


def _fmt(x):
    return f"{x:.17g}"


def format_state(state, meta=None):
    """Serialise a state to the text format (a single string)."""
    if isinstance(state, PureState):
        kind, data = "pure", state.amplitudes
    elif isinstance(state, DensityFunctional):
        kind, data = "mixed", np.asarray(state.matrix).reshape(-1)
    else:
        raise InvalidArgument(f"cannot serialise {type(state).__name__}")
    lines = [
        f"format_version {FORMAT_VERSION}",
        f"kind {kind}",
        f"parties {state.parties}",
        f"local_dim {state.local_dim}",
    ]
    for key, value in sorted((meta or {}).items()):
        key, value = str(key), str(value)
        if not key or any(c.isspace() for c in key) or "\n" in value:
            raise InvalidArgument(f"bad metadata entry {key!r}")
        lines.append(f"meta {key} {value}")
    lines.append("data")
    lines.extend(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in data)
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_state(state, path, meta=None):
    """Write atomically: a temporary file in the target directory is renamed."""
    text = format_state(state, meta)
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True, eq=False)
class StateFile:
    """Parsed contents of a state file, before validation into a state."""

    format_version: int
    kind: str
    parties: int
    local_dim: int
    data: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict)

    def to_state(self):
        n, k = self.local_dim, self.parties
        if self.kind == "pure":
            norm = float(np.linalg.norm(self.data))
            if not math.isfinite(norm) or abs(norm - 1.0) > UNIT_TOL:
                raise InvariantViolation(f"amplitudes have norm {norm!r}, expected 1",
                                         field="data")
            return PureState(k, n, self.data)
        dim = n**k
        rho = self.data.reshape(dim, dim)
        if not np.all(np.isfinite(rho)):
            raise InvariantViolation("non-finite matrix entry", field="data")
        tr = np.trace(rho)
        if abs(tr - 1.0) > DENSITY_TOL:
            raise TraceInvalid(f"trace is {tr.real:.17g}{tr.imag:+.3g}j, expected 1",
                               field="data")
        try:
            return DensityFunctional(k, n, rho)
        except InvalidArgument as exc:
            raise InvariantViolation(str(exc), field="data") from None


def _int_field(tokens, lineno, name):
    if len(tokens) != 2:
        raise ParseError(f"expected '{name} <integer>'", line=lineno, field=name)
    try:
        val = int(tokens[1])
    except ValueError:
        raise ParseError(f"not an integer: {tokens[1]!r}", line=lineno, field=name) from None
    return val


def parse_state_text(text):
    """Parse file text into a ``StateFile``; every failure is a StateFileError."""
    header = {}
    meta = {}
    values = []
    in_data = False
    ended = False
    data_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise ParseError("content after 'end'", line=lineno)
        tokens = line.split()
        if in_data:
            if tokens == ["end"]:
                ended = True
                continue
            if len(tokens) != 2:
                raise ParseError("data lines need exactly two numbers 're im'",
                                 line=lineno, field="data")
            try:
                values.append(complex(float(tokens[0]), float(tokens[1])))
            except ValueError:
                raise ParseError(f"bad number in {line!r}", line=lineno, field="data") from None
            continue
        key = tokens[0]
        if key == "data":
            if len(tokens) != 1:
                raise ParseError("'data' takes no arguments", line=lineno, field="data")
            missing = [f for f in _HEADER_FIELDS if f not in header]
            if missing:
                raise ParseError(f"missing header field(s) before data: {', '.join(missing)}",
                                 line=lineno, field=missing[0])
            in_data, data_line = True, lineno
        elif key == "meta":
            if len(tokens) < 2:
                raise ParseError("expected 'meta <key> <value>'", line=lineno, field="meta")
            meta[tokens[1]] = " ".join(tokens[2:])
        elif key in _HEADER_FIELDS:
            if key in header:
                raise ParseError(f"duplicate field '{key}'", line=lineno, field=key)
            if key == "kind":
                if len(tokens) != 2 or tokens[1] not in ("pure", "mixed"):
                    raise ParseError("kind must be 'pure' or 'mixed'", line=lineno, field=key)
                header[key] = tokens[1]
            else:
                val = _int_field(tokens, lineno, key)
                if key == "format_version" and val != FORMAT_VERSION:
                    raise VersionMismatch(
                        f"file has format_version {val}, this reader supports {FORMAT_VERSION}",
                        line=lineno, field=key)
                if key in ("parties", "local_dim") and not 1 <= val <= 64:
                    raise ParseError(f"{key} must be between 1 and 64", line=lineno, field=key)
                header[key] = val
        else:
            raise ParseError(f"unknown field '{key}'", line=lineno, field=key)
    if not in_data:
        raise ParseError("no 'data' section", field="data")
    if not ended:
        raise ParseError("data section not terminated by 'end'", field="data")
    n, k = header["local_dim"], header["parties"]
    expected = n**k if header["kind"] == "pure" else n ** (2 * k)
    if expected > 1 << 26:
        raise ParseError(f"declared size {expected} is too large", line=data_line, field="data")
    if len(values) != expected:
        raise LengthMismatch(
            f"{header['kind']} state with parties={k}, local_dim={n} needs {expected} "
            f"entries, found {len(values)}", line=data_line, field="data")
    return StateFile(header["format_version"], header["kind"], k, n,
                     np.array(values, dtype=complex), meta)


def read_state_file(path):
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"file is not valid UTF-8 ({exc.reason})") from None
    return parse_state_text(text)


def read_state(path):
    """Read and validate a state file; returns a PureState or DensityFunctional."""
    return read_state_file(path).to_state()


# --- generators ----------------------------------------------------------


def _singlet(params, rng):
    n = int(params.get("n", 2))
    if n < 2:
        raise InvalidArgument("singlet needs n >= 2")
    e = np.eye(n)
    return PureState(2, n, wedge([e[0], e[1]]))


def xi_k_vector(terms, n):
    """(1/√m) Σ_{i<m} e_i ∧ f_i with e_i, f_i the basis vectors 2i and 2i+1."""
    if terms < 1 or n < 2 * terms:
        raise InvalidArgument(f"xi_k with {terms} terms needs n >= {2 * terms}")
    e = np.eye(n)
    v = sum(wedge([e[2 * i], e[2 * i + 1]]) for i in range(terms))
    return v / math.sqrt(terms)


def _xi_k(params, rng):
    k = int(params.get("k", params.get("terms", 1)))
    n = int(params.get("n", 2 * k))
    return PureState(2, n, xi_k_vector(k, n))


def _tracial_wedge(params, rng):
    n = int(params.get("n", 3))
    k = int(params.get("k", 2))
    if not 1 <= k <= n:
        raise InvalidArgument("tracial_wedge needs 1 <= k <= n")
    e = np.eye(n)
    dim = n**k
    rho = np.zeros((dim, dim), dtype=complex)
    subsets = list(combinations(range(n), k))
    for idx in subsets:
        v = wedge([e[i] for i in idx])
        rho += np.outer(v, v.conj())
    return DensityFunctional(k, n, rho / len(subsets))


def _haar_pure(params, rng):
    n = int(params.get("n", 2))
    k = int(params.get("k", 2))
    sector = params.get("sector", "full")
    basis = np.asarray(sector_basis(k, n, sector))
    if basis.shape[1] == 0:
        raise InvalidArgument(f"the {sector} sector is empty for k={k}, n={n}")
    coeffs = random_unit_vector(basis.shape[1], rng)
    return PureState.from_vector(basis @ coeffs, k, n, normalize=True)


def _product_mixture(params, rng):
    n = int(params.get("n", 2))
    k = int(params.get("k", 2))
    terms = int(params.get("terms", 3))
    if terms < 1:
        raise InvalidArgument("product_mixture needs terms >= 1")
    weights = rng.dirichlet(np.ones(terms))
    dim = n**k
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        v = product_vector([random_unit_vector(n, rng) for _ in range(k)])
        rho += w * np.outer(v, v.conj())
    return DensityFunctional(k, n, rho)


def _mixed_sector(params, rng):
    """Random mixed state supported on a symmetry sector (default fermionic)."""
    n = int(params.get("n", 4))
    k = int(params.get("k", 2))
    sector = params.get("sector", "fermionic")
    basis = np.asarray(sector_basis(k, n, sector))
    d = basis.shape[1]
    if d == 0:
        raise InvalidArgument(f"the {sector} sector is empty for k={k}, n={n}")
    rank = int(params.get("rank", d))
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    r = g @ g.conj().T
    r /= np.trace(r).real
    return DensityFunctional(k, n, basis @ r @ basis.conj().T)


GENERATORS = {
    "singlet": _singlet,
    "xi_k": _xi_k,
    "tracial_wedge": _tracial_wedge,
    "haar_pure": _haar_pure,
    "product_mixture": _product_mixture,
    "mixed_sector": _mixed_sector,
}


def generate(name, params=None, seed=0):
    """Build a canonical or random state; seeded generators are deterministic."""
    if name not in GENERATORS:
        raise InvalidArgument(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}")
    rng = np.random.default_rng(seed)
    try:
        return GENERATORS[name](dict(params or {}), rng)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgument):
            raise
        raise InvalidArgument(f"bad parameters for {name}: {exc}") from None


# --- manifests -----------------------------------------------------------


@dataclass(frozen=True)
class RunManifest:
    """Inputs that pin a computation down, plus how long it took."""

    seed: int
    budget: dict
    spec: dict
    version: str
    wall_time: float
    python: str = field(default_factory=platform.python_version)
    numpy: str = field(default_factory=lambda: np.__version__)

    def as_dict(self):
        return asdict(self)


def make_manifest(seed, budget, spec, started):
    from . import __version__

    return RunManifest(int(seed), budget.as_dict(), asdict(spec), __version__,
                       time.perf_counter() - started)
