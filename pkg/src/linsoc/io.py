"""Profile documents (JSON) and seeded random profile generation."""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .feasibility import induced_ranking
from .model import Instance, ModelError, Profile, Ranking

SCHEMA_VERSION = 1


class ProfileFormatError(ModelError):
    """A profile document problem, located by JSON line/column or field path."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text, where: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ProfileFormatError(f"expected a rational string like \"3/4\", got {text!r}", where)
    try:
        return Fraction(text.strip() if isinstance(text, str) else text)
    except (ValueError, ZeroDivisionError):
        raise ProfileFormatError(f"not a rational number: {text!r}", where) from None


def _field(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ProfileFormatError(f"missing field {key!r}", where)
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ProfileFormatError(f"field {key!r} has the wrong type", f"{where}.{key}" if where else key)
    return value


def parse_profile(text: str) -> Profile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ProfileFormatError("top level must be an object")
    version = _field(doc, "schema-version", int, "")
    if version != SCHEMA_VERSION:
        raise ProfileFormatError(f"unsupported schema-version {version}", "schema-version")
    d = _field(doc, "dimension", int, "")
    if d < 1:
        raise ProfileFormatError("dimension must be positive", "dimension")
    cands = _field(doc, "candidates", list, "")
    feats = []
    seen = {}
    for i, c in enumerate(cands):
        where = f"candidates[{i}]"
        cid = _field(c, "id", str, where)
        if cid in seen:
            raise ProfileFormatError(f"duplicate candidate id {cid!r} (first at candidates[{seen[cid]}])", f"{where}.id")
        seen[cid] = i
        xs = _field(c, "features", list, where)
        if len(xs) != d:
            raise ProfileFormatError(f"{len(xs)} features, dimension is {d}", f"{where}.features")
        feats.append((cid, tuple(parse_rational(x, f"{where}.features[{j}]") for j, x in enumerate(xs))))
    if not feats:
        raise ProfileFormatError("no candidates", "candidates")
    try:
        inst = Instance.from_features(feats)
    except ModelError as exc:
        raise ProfileFormatError(str(exc), "candidates") from None
    voters = []
    vseen = {}
    for i, v in enumerate(_field(doc, "voters", list, "")):
        where = f"voters[{i}]"
        vid = _field(v, "id", str, where)
        if vid in vseen:
            raise ProfileFormatError(f"duplicate voter id {vid!r} (first at voters[{vseen[vid]}])", f"{where}.id")
        vseen[vid] = i
        has_r, has_t = "ranking" in v, "theta" in v
        if has_r == has_t:
            raise ProfileFormatError("give exactly one of 'ranking' or 'theta'", where)
        if has_t:
            ts = _field(v, "theta", list, where)
            if len(ts) != d:
                raise ProfileFormatError(f"{len(ts)} coordinates, dimension is {d}", f"{where}.theta")
            theta = [parse_rational(t, f"{where}.theta[{j}]") for j, t in enumerate(ts)]
            ranking = induced_ranking(inst, theta)
        else:
            order = _field(v, "ranking", list, where)
            try:
                ranking = Ranking(order)
                Profile(inst, ((vid, ranking),))
            except ModelError as exc:
                raise ProfileFormatError(str(exc), f"{where}.ranking") from None
        voters.append((vid, ranking))
    try:
        return Profile(inst, tuple(voters))
    except ModelError as exc:
        raise ProfileFormatError(str(exc), "voters") from None


def profile_document(profile: Profile) -> dict:
    inst = profile.instance
    return {
        "schema-version": SCHEMA_VERSION,
        "dimension": inst.dimension,
        "candidates": [{"id": c, "features": [format_rational(x) for x in inst.feature(c)]} for c in inst.ids],
        "voters": [{"id": v, "ranking": list(r)} for v, r in profile.voters],
    }


def serialize_profile(profile: Profile) -> str:
    """Canonical text: voters always stored as explicit rankings."""
    return json.dumps(profile_document(profile), indent=2) + "\n"


def read_profile(path) -> Profile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read())


def _sample(rng: random.Random, d: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-1000, 1000), 1000) for _ in range(d))


def gen_profile(seed: int, m: int, d: int, n: int, max_tries: int = 10000) -> Profile:
    """Random features and voter thetas on the k/1000 grid, deterministic in ``seed``.

    Features are resampled until pairwise distinct; each theta until all
    candidate rewards are distinct, so the induced ranking is strict.
    """
    if min(m, d, n) < 1:
        raise ModelError("m, d and n must be positive")
    rng = random.Random(seed)
    feats = []
    seen = set()
    tries = 0
    while len(feats) < m:
        x = _sample(rng, d)
        tries += 1
        if tries > max_tries:
            raise ModelError(f"could not draw {m} distinct feature vectors in {max_tries} tries")
        if x not in seen:
            seen.add(x)
            feats.append((f"c{len(feats) + 1}", x))
    inst = Instance.from_features(feats)
    voters = []
    for i in range(n):
        for _ in range(max_tries):
            theta = _sample(rng, d)
            rewards = [sum(t * v for t, v in zip(theta, x)) for _, x in feats]
            if len(set(rewards)) == m:
                break
        else:
            raise ModelError(f"could not draw a nondegenerate theta in {max_tries} tries")
        voters.append((f"v{i + 1}", induced_ranking(inst, theta)))
    return Profile(inst, tuple(voters))
