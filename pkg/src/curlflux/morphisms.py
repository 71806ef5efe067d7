"""Endomorphisms of a free group: application, composition, classification.

Conventions fixed here and relied on throughout:

* ``compose(a, b)`` applies ``a`` FIRST: the composite sends w to b(a(w)).
  All composition inequalities in :mod:`curlflux.metrics` depend on this.
* ``inner(ctx, g)`` is the conjugation w -> g w g^-1.

A map is *simple* when it is a conjugation composed with a permutation of
the letters, i.e. phi(x_i) = g pi(x_i) g^-1 for some word g and a
permutation pi of the 2r letters commuting with inversion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from curlflux import _kernels, words
from curlflux.errors import (
    InverseVerificationError,
    MapParseError,
    RankMismatchError,
)
from curlflux.words import GroupContext, Word


@dataclass(frozen=True)
class Endomorphism:
    """A map of the free group given by its generator images.

    Images must be freely reduced; they may be empty (the map need not be
    injective).  ``letter_images`` extends the table to all 2r letter codes.
    """

    ctx: GroupContext
    images: tuple  # one reduced Word per generator
    label: Optional[str] = None
    letter_images: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        images = tuple(tuple(img) for img in self.images)
        if len(images) != self.ctx.rank:
            raise ValueError(
                f"expected {self.ctx.rank} images, got {len(images)}"
            )
        table = []
        num_letters = self.ctx.num_letters
        for img in images:
            if any(not 0 <= c < num_letters for c in img):
                raise ValueError(f"image {img!r} has letters outside rank "
                                 f"{self.ctx.rank}")
            if not words.is_reduced(img):
                raise ValueError(f"image {img!r} is not freely reduced")
            table.append(img)
            table.append(words.inverse(img))
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "letter_images", tuple(table))

    def __call__(self, w: Word) -> Word:
        return tuple(_kernels.apply_images(self.letter_images, w))

    def image_length(self, w) -> int:
        return len(_kernels.apply_images(self.letter_images, w))

    @property
    def max_image_length(self) -> int:
        return max((len(img) for img in self.images), default=0)

    def is_identity(self) -> bool:
        return all(
            img == (2 * i,) for i, img in enumerate(self.images)
        )

    def describe(self) -> str:
        if self.label:
            return self.label
        pairs = (
            f"{self.ctx.names[i]}->{words.format_word(self.ctx, img)}"
            for i, img in enumerate(self.images)
        )
        return ", ".join(pairs)


@dataclass(frozen=True)
class VerifiedAutomorphism:
    """An endomorphism paired with an inverse checked on every generator."""

    forward: Endomorphism
    inverse: Endomorphism


def identity(ctx: GroupContext) -> Endomorphism:
    return Endomorphism(ctx, tuple((2 * i,) for i in range(ctx.rank)),
                        label="identity")


def apply(phi: Endomorphism, w: Word) -> Word:
    """Reduced image phi(w), by letterwise substitution and reduction."""
    return phi(w)


def compose(a: Endomorphism, b: Endomorphism) -> Endomorphism:
    """The map w -> b(a(w)); ``a`` is applied first."""
    if a.ctx.rank != b.ctx.rank:
        raise RankMismatchError(
            f"cannot compose rank {a.ctx.rank} with rank {b.ctx.rank}"
        )
    return Endomorphism(a.ctx, tuple(b(img) for img in a.images))


def power(phi: Endomorphism, n: int) -> Endomorphism:
    """n-fold self-composition; power(phi, 0) is the identity."""
    if n < 0:
        raise ValueError("n must be >= 0")
    result = identity(phi.ctx)
    for _ in range(n):
        result = compose(result, phi)
    return result


def inner(ctx: GroupContext, g: Word) -> Endomorphism:
    """Conjugation by g: sends w to g w g^-1."""
    g = tuple(g)
    if not words.is_reduced(g):
        raise ValueError("g must be freely reduced")
    g_inv = words.inverse(g)
    imgs = tuple(
        words.concat(g, words.concat((2 * i,), g_inv))
        for i in range(ctx.rank)
    )
    return Endomorphism(ctx, imgs)


def permutation(ctx: GroupContext, letter_map: Sequence[int]) -> Endomorphism:
    """Automorphism permuting the 2r letters.

    ``letter_map`` gives the image code of every letter code and must be a
    bijection commuting with inversion.
    """
    m = tuple(letter_map)
    n = ctx.num_letters
    if sorted(m) != list(range(n)):
        raise ValueError("letter_map must be a bijection of the letter codes")
    if any(m[c ^ 1] != m[c] ^ 1 for c in range(n)):
        raise ValueError("letter_map must commute with inversion")
    return Endomorphism(ctx, tuple((m[2 * i],) for i in range(ctx.rank)))


def verify_inverse(phi: Endomorphism, psi: Endomorphism) -> VerifiedAutomorphism:
    """Check that psi inverts phi on every generator, both ways round.

    Raises InverseVerificationError naming the first violated generator.
    """
    if phi.ctx.rank != psi.ctx.rank:
        raise RankMismatchError("rank mismatch between map and claimed inverse")
    for i in range(phi.ctx.rank):
        gen = (2 * i,)
        if psi(phi(gen)) != gen:
            raise InverseVerificationError(phi.ctx.names[i], "psi(phi(x)) != x")
        if phi(psi(gen)) != gen:
            raise InverseVerificationError(phi.ctx.names[i], "phi(psi(x)) != x")
    return VerifiedAutomorphism(phi, psi)


# -- classification ------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    """Shape of an endomorphism.

    kind is one of 'permutation', 'inner', 'simple', 'power', 'general'.
    For conjugation-like kinds, ``conjugator`` holds g and ``letter_map``
    the permutation part; for 'power', ``exponent`` holds k.
    """

    kind: str
    conjugator: Optional[Word] = None
    letter_map: Optional[tuple] = None
    exponent: Optional[int] = None

    @property
    def is_simple(self) -> bool:
        return self.kind in ("permutation", "inner", "simple")


def _as_letter_permutation(phi: Endomorphism):
    """letter_map if every image is a single letter with distinct indices."""
    if any(len(img) != 1 for img in phi.images):
        return None
    indices = [img[0] >> 1 for img in phi.images]
    if sorted(indices) != list(range(phi.ctx.rank)):
        return None
    m = [0] * phi.ctx.num_letters
    for i, img in enumerate(phi.images):
        m[2 * i] = img[0]
        m[2 * i + 1] = img[0] ^ 1
    return tuple(m)


def _simple_decomposition(phi: Endomorphism):
    """Find (g, letter_map) with phi(x_i) = g pi(x_i) g^-1, or None.

    When such a g exists, some image equals g pi(x_i) g^-1 without any
    cancellation (rank >= 2 guarantees a letter clashing with neither end
    of g), so g appears among the prefixes of a longest image.
    """
    longest = max(phi.images, key=len, default=())
    for glen in range(len(longest) + 1):
        g = longest[:glen]
        g_inv = words.inverse(g)
        conj_back = Endomorphism(
            phi.ctx,
            tuple(
                words.concat(g_inv, words.concat(img, g))
                for img in phi.images
            ),
        )
        m = _as_letter_permutation(conj_back)
        if m is not None:
            return g, m
    return None


def classify(phi: Endomorphism) -> Classification:
    """Recognise permutations, conjugations, their compositions, and power
    maps; everything else is 'general'.

    Permutation and inner are reported in preference to the generic simple
    form when the conjugator or the permutation part is trivial.
    """
    m = _as_letter_permutation(phi)
    if m is not None:
        return Classification("permutation", conjugator=(), letter_map=m)
    decomp = _simple_decomposition(phi)
    if decomp is not None:
        g, m = decomp
        if all(m[c] == c for c in range(phi.ctx.num_letters)):
            return Classification("inner", conjugator=g, letter_map=m)
        return Classification("simple", conjugator=g, letter_map=m)
    k = _common_power(phi)
    if k is not None:
        return Classification("power", exponent=k)
    return Classification("general")


def _common_power(phi: Endomorphism):
    k = None
    for i, img in enumerate(phi.images):
        if not img or len(set(img)) != 1 or img[0] != 2 * i:
            return None
        if k is None:
            k = len(img)
        elif len(img) != k:
            return None
    return k if k is not None and k >= 2 else None


def is_simple(phi: Endomorphism) -> bool:
    """True when phi is a conjugation composed with a letter permutation."""
    return classify(phi).is_simple


def power_map(ctx: GroupContext, k: int) -> Endomorphism:
    """The endomorphism sending every generator to its k-th power."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return Endomorphism(ctx, tuple((2 * i,) * k for i in range(ctx.rank)),
                        label=f"power-{k}")


# -- Nielsen moves and random automorphisms ------------------------------

def nielsen_moves(ctx: GroupContext):
    """Elementary automorphisms with their inverses.

    Transpositions of adjacent generators, inversion of each generator, and
    the transvections x_i -> x_i x_j^±1 for i != j.  Together they generate
    the automorphism group.
    """
    moves = []
    r = ctx.rank
    for i in range(r - 1):
        m = list(range(2 * r))
        m[2 * i], m[2 * i + 2] = m[2 * i + 2], m[2 * i]
        m[2 * i + 1], m[2 * i + 3] = m[2 * i + 3], m[2 * i + 1]
        swap = permutation(ctx, m)
        moves.append((swap, swap))
    for i in range(r):
        m = list(range(2 * r))
        m[2 * i], m[2 * i + 1] = m[2 * i + 1], m[2 * i]
        flip = permutation(ctx, m)
        moves.append((flip, flip))
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            fwd_imgs = [(2 * a,) for a in range(r)]
            bwd_imgs = [(2 * a,) for a in range(r)]
            fwd_imgs[i] = (2 * i, 2 * j)
            bwd_imgs[i] = (2 * i, 2 * j + 1)
            moves.append(
                (Endomorphism(ctx, tuple(fwd_imgs)),
                 Endomorphism(ctx, tuple(bwd_imgs)))
            )
    return moves


def random_automorphism(ctx: GroupContext, num_moves: int,
                        rng: random.Random) -> VerifiedAutomorphism:
    """Compose ``num_moves`` random Nielsen moves; inverse built in reverse."""
    moves = nielsen_moves(ctx)
    fwd = identity(ctx)
    chosen = [rng.randrange(len(moves)) for _ in range(num_moves)]
    for idx in chosen:
        fwd = compose(fwd, moves[idx][0])
    bwd = identity(ctx)
    for idx in reversed(chosen):
        bwd = compose(bwd, moves[idx][1])
    return verify_inverse(fwd, bwd)


# -- map files ------------------------------------------------------------

def parse_map_file(text: str):
    """Parse the map-file format; returns (endomorphism, inverse or None).

    Grammar: optional ``rank: N`` header; one ``name: word`` line per
    generator (names are distinct single lowercase letters, declared in
    order); an optional ``inverse:`` line followed by the same generator
    lines for the claimed inverse.  Blank lines and ``#`` comments are
    ignored.  Images must be freely reduced; ``1`` is the empty word.
    """
    declared_rank = None
    forward_lines = []
    inverse_lines = []
    section = forward_lines
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "inverse:":
            if section is inverse_lines:
                raise MapParseError(f"line {lineno}: duplicate inverse section")
            section = inverse_lines
            continue
        if ":" not in line:
            raise MapParseError(f"line {lineno}: expected 'name: word'")
        name, img_text = (part.strip() for part in line.split(":", 1))
        if name == "rank":
            if section is not forward_lines or forward_lines:
                raise MapParseError(f"line {lineno}: rank header must come first")
            try:
                declared_rank = int(img_text)
            except ValueError:
                raise MapParseError(f"line {lineno}: bad rank {img_text!r}")
            continue
        section.append((lineno, name, img_text))

    if not forward_lines:
        raise MapParseError("no generator lines")
    names = []
    for lineno, name, _ in forward_lines:
        if len(name) != 1 or not name.islower():
            raise MapParseError(
                f"line {lineno}: generator name must be a single lowercase "
                f"letter, got {name!r}"
            )
        if name in names:
            raise MapParseError(f"line {lineno}: duplicate generator {name!r}")
        names.append(name)
    rank = len(names)
    if declared_rank is not None and declared_rank != rank:
        raise MapParseError(
            f"rank header says {declared_rank} but {rank} generators declared"
        )
    ctx = GroupContext(rank, tuple(names))

    def build(lines, what):
        by_name = {}
        for lineno, name, img_text in lines:
            if name not in names:
                raise MapParseError(f"line {lineno}: unknown generator {name!r}")
            if name in by_name:
                raise MapParseError(f"line {lineno}: duplicate generator {name!r}")
            by_name[name] = words.parse_word(ctx, img_text)
        missing = [nm for nm in names if nm not in by_name]
        if missing:
            raise MapParseError(f"{what}: missing image for {missing[0]!r}")
        return Endomorphism(ctx, tuple(by_name[nm] for nm in names))

    phi = build(forward_lines, "map")
    psi = build(inverse_lines, "inverse") if inverse_lines else None
    return phi, psi


def format_map_file(phi: Endomorphism, psi: Optional[Endomorphism] = None) -> str:
    """Canonical text for a map file; round-trips through parse_map_file."""
    ctx = phi.ctx
    lines = [f"rank: {ctx.rank}"]
    for i, img in enumerate(phi.images):
        lines.append(f"{ctx.names[i]}: {words.format_word(ctx, img)}")
    if psi is not None:
        lines.append("inverse:")
        for i, img in enumerate(psi.images):
            lines.append(f"{ctx.names[i]}: {words.format_word(ctx, img)}")
    return "\n".join(lines) + "\n"
