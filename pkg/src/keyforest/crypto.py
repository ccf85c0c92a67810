"""PRF-chained key assignment over a forest: no public information needed.

Secrets flow top-down along the forest: roots get seeded random secrets,
every other label's secret is the PRF of its parent's secret keyed on the
label's name.  Users at a label receive exactly the anchor secrets for that
label, from which every authorized key (and nothing else) can be rederived.
"""

from __future__ import annotations

import hashlib
import hmac
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

from .policy import Policy, linear_extension
from .treepart import AnchorMap

KEY_BYTES = 32
_LABEL_PREFIX = b"node:"
_ROOT_PREFIX = b"root:"


class InconsistentAnchors(ValueError):
    """An anchor set names a label the owner does not dominate."""


class MalformedSigma(ValueError):
    """An issued secret set lacks the anchor a derivation needs."""


def _hmac_sha256(key: bytes, data: bytes) -> bytes:
    return hmac.new(key, data, hashlib.sha256).digest()


@dataclass(frozen=True)
class PrfSpec:
    """A keyed function whose output re-keys itself (key space == range)."""

    name: str
    fn: Callable[[bytes, bytes], bytes]
    key_bytes: int = KEY_BYTES


HMAC_SHA256 = PrfSpec("hmac-sha256", _hmac_sha256)

PRFS: dict[str, PrfSpec] = {HMAC_SHA256.name: HMAC_SHA256}


def label_name(x: int) -> bytes:
    """Injective 13-byte name of a label: ``node:`` plus 8 big-endian bytes."""
    if x < 0:
        raise ValueError("labels are non-negative")
    return _LABEL_PREFIX + x.to_bytes(8, "big")


def _root_name(x: int) -> bytes:
    return _ROOT_PREFIX + x.to_bytes(8, "big")


SigmaEntry = tuple[int, bytes]


@dataclass(frozen=True)
class SchemeState:
    """Everything a key-assignment instance holds; ``pub`` stays empty."""

    secrets: tuple[bytes, ...]
    issued: tuple[tuple[SigmaEntry, ...], ...]
    keys: tuple[bytes, ...]
    prf_name: str = HMAC_SHA256.name
    pub: tuple = ()


def _parent_list(p: Policy, forest) -> list[int | None]:
    parents = forest.parent_list()
    if len(parents) != p.n:
        raise ValueError(f"forest covers {len(parents)} labels, policy has {p.n}")
    return parents


def _check_anchors(p: Policy, anchor_map: Mapping[int, frozenset[int]]) -> None:
    for x in range(p.n):
        members = anchor_map[x]
        if x not in members:
            raise InconsistentAnchors(f"label {x} missing from its own anchor set")
        for z in members:
            if not p.leq(z, x):
                raise InconsistentAnchors(f"anchor {z} of label {x} is not dominated by it")


def setup(
    p: Policy,
    forest,
    anchor_map: AnchorMap,
    seed: bytes,
    *,
    prf: PrfSpec = HMAC_SHA256,
    root_secrets: Mapping[int, bytes] | None = None,
) -> SchemeState:
    """Generate all per-label secrets, issued secret sets and keys.

    Roots draw their secrets deterministically from ``seed`` (so runs can be
    replayed); every other label chains off its forest parent.  Individual
    root secrets may be overridden through ``root_secrets``, which is what
    lets tests pin down how far one root's randomness reaches.
    """
    if len(seed) != prf.key_bytes:
        raise ValueError(f"seed must be {prf.key_bytes} bytes")
    parents = _parent_list(p, forest)
    _check_anchors(p, anchor_map)
    overrides = dict(root_secrets or {})
    for x, value in overrides.items():
        if not 0 <= x < p.n or parents[x] is not None:
            raise ValueError(f"root secret override for non-root label {x}")
        if len(value) != prf.key_bytes:
            raise ValueError(f"root secret for label {x} must be {prf.key_bytes} bytes")

    secrets: list[bytes | None] = [None] * p.n
    for x in linear_extension(p):
        parent = parents[x]
        if parent is None:
            secrets[x] = overrides.get(x) or prf.fn(seed, _root_name(x))
        else:
            parent_secret = secrets[parent]
            assert parent_secret is not None  # linear extension orders parents first
            secrets[x] = prf.fn(parent_secret, label_name(x))

    issued = tuple(
        tuple(sorted((z, secrets[z]) for z in anchor_map[x])) for x in range(p.n)
    )
    keys = tuple(prf.fn(secrets[x], label_name(x)) for x in range(p.n))
    return SchemeState(tuple(secrets), issued, keys, prf.name)  # type: ignore[arg-type]


def derive(
    p: Policy,
    forest,
    anchor_map: AnchorMap,
    x: int,
    y: int,
    sigma_x: Iterable[SigmaEntry],
    *,
    prf: PrfSpec = HMAC_SHA256,
) -> bytes | None:
    """Key of ``y`` computed from the secrets issued for ``x``.

    Returns ``None`` when ``y`` is not dominated by ``x`` (the refusal is a
    value, not an error).  Raises ``MalformedSigma`` when the issued set is
    missing the anchor the walk needs.
    """
    if not p.leq(y, x):
        return None
    parents = _parent_list(p, forest)
    anchors_x = anchor_map[x]
    held = dict(sigma_x)

    walk: list[int] = []
    z: int | None = y
    while z is not None and z not in anchors_x:
        walk.append(z)
        z = parents[z]
    if z is None:
        raise MalformedSigma(f"no anchor of {x} sits above {y} in the forest")
    secret = held.get(z)
    if secret is None:
        raise MalformedSigma(f"issued set for {x} lacks the secret of anchor {z}")
    for node in reversed(walk):
        secret = prf.fn(secret, label_name(node))
    return prf.fn(secret, label_name(y))


@dataclass(frozen=True)
class SchemeReport:
    """Outcome of a full correctness/exposure sweep over a scheme instance."""

    checks_run: int
    failures: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_scheme(
    p: Policy,
    forest,
    anchor_map: AnchorMap,
    state: SchemeState,
    *,
    prf: PrfSpec | None = None,
) -> SchemeReport:
    """Check derivability, non-exposure and key uniqueness of an instance.

    (a) every dominated label's key is derivable from the issued secrets and
    matches; (b) no issued secret sits forest-above a label the owner does
    not dominate; (c) no two labels share a key.
    """
    prf_spec = prf or PRFS[state.prf_name]
    parents = _parent_list(p, forest)
    checks = 0
    failures: list[str] = []

    ancestor_mask = [0] * p.n
    for x in linear_extension(p):
        parent = parents[x]
        ancestor_mask[x] = (1 << x) | (ancestor_mask[parent] if parent is not None else 0)

    for x in range(p.n):
        sigma_x = state.issued[x]
        for y in range(p.n):
            checks += 1
            if p.leq(y, x):
                try:
                    got = derive(p, forest, anchor_map, x, y, sigma_x, prf=prf_spec)
                except MalformedSigma:
                    got = None
                if got != state.keys[y]:
                    failures.append(f"derive:{x}->{y}")
            else:
                if derive(p, forest, anchor_map, x, y, sigma_x, prf=prf_spec) is not None:
                    failures.append(f"bot:{x}->{y}")
                for z, _ in sigma_x:
                    if (ancestor_mask[y] >> z) & 1:
                        failures.append(f"exposure:{x}:{z}:{y}")

    seen: dict[bytes, int] = {}
    for x, key in enumerate(state.keys):
        checks += 1
        if key in seen:
            failures.append(f"key-collision:{seen[key]},{x}")
        else:
            seen[key] = x
    return SchemeReport(checks, tuple(failures))


def write_key_material(state: SchemeState) -> str:
    """Render the key material file: header, issued groups, then keys."""
    lines = [f"ces v1 {state.prf_name}"]
    for x, sigma_x in enumerate(state.issued):
        lines.append(f"sigma {x}:")
        lines.extend(f"s {z} {secret.hex()}" for z, secret in sigma_x)
    lines.extend(f"k {x} {key.hex()}" for x, key in enumerate(state.keys))
    return "\n".join(lines) + "\n"


def parse_key_material(text: str) -> SchemeState:
    """Parse ``write_key_material`` output back into a state."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty key material")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "ces" or header[1] != "v1":
        raise ValueError("bad key material header")
    prf_name = header[2]
    if prf_name not in PRFS:
        raise ValueError(f"unknown prf {prf_name!r}")

    issued: dict[int, list[SigmaEntry]] = {}
    keys: dict[int, bytes] = {}
    owner: int | None = None
    for lineno, raw in enumerate(lines[1:], 2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "sigma":
            if len(fields) != 2 or not fields[1].endswith(":"):
                raise ValueError(f"line {lineno}: expected 'sigma <owner>:'")
            owner = int(fields[1][:-1])
            if owner in issued:
                raise ValueError(f"line {lineno}: duplicate sigma group for {owner}")
            issued[owner] = []
        elif fields[0] == "s":
            if owner is None:
                raise ValueError(f"line {lineno}: 's' line outside a sigma group")
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: expected 's <label> <hex>'")
            issued[owner].append((int(fields[1]), bytes.fromhex(fields[2])))
        elif fields[0] == "k":
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: expected 'k <label> <hex>'")
            keys[int(fields[1])] = bytes.fromhex(fields[2])
        else:
            raise ValueError(f"line {lineno}: unknown directive {fields[0]!r}")

    n = len(keys)
    if set(keys) != set(range(n)) or set(issued) != set(range(n)):
        raise ValueError("key material must cover labels 0..n-1 exactly once")

    secrets: dict[int, bytes] = {}
    for x in range(n):
        for z, secret in issued[x]:
            if secrets.setdefault(z, secret) != secret:
                raise ValueError(f"conflicting secrets recorded for label {z}")
    if set(secrets) < set(range(n)):
        missing = sorted(set(range(n)) - set(secrets))
        raise ValueError(f"no secret recorded for labels {missing}")

    return SchemeState(
        secrets=tuple(secrets[x] for x in range(n)),
        issued=tuple(tuple(sorted(issued[x])) for x in range(n)),
        keys=tuple(keys[x] for x in range(n)),
        prf_name=prf_name,
    )
