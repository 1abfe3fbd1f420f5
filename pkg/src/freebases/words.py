"""Words in a free group of finite rank.

A letter is a nonzero integer: ``i`` stands for the i-th generator ``x_i``
(1-based) and ``-i`` for its inverse.  A word is a tuple of letters; the
empty tuple is the identity.  Functions returning words always return freely
reduced tuples.

Text encoding: ``a``..``z`` are x_1..x_26, ``A``..``Z`` their inverses, and
the string ``"1"`` denotes the empty word.  So ``"abA"`` parses to
``(1, 2, -1)``.

The letter order used everywhere for tie-breaking is
x_1 < x_1^-1 < x_2 < x_2^-1 < ... (generator before its inverse).
"""

DEFAULT_RANK = 3

Word = tuple  # tuple of nonzero ints, freely reduced


def letter_key(letter):
    """Sort key realising the order x_1 < x_1^-1 < x_2 < x_2^-1 < ..."""
    return (abs(letter), 0 if letter > 0 else 1)


def check_letters(seq, rank):
    for letter in seq:
        if not isinstance(letter, int) or letter == 0:
            raise ValueError("letters must be nonzero integers, got %r" % (letter,))
        if rank is not None and abs(letter) > rank:
            raise ValueError(
                "letter index %d out of range for rank %d" % (abs(letter), rank)
            )


def reduce(seq, rank=None):
    """Freely reduce a letter sequence.

    Cancels adjacent inverse pairs until none remain.  With ``rank`` given,
    raises ValueError on letters outside ``1..rank``.
    """
    check_letters(seq, rank)
    out = []
    for letter in seq:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def is_reduced(seq):
    return all(seq[k] != -seq[k + 1] for k in range(len(seq) - 1))


def invert(w):
    """Inverse word: reversed letters, each negated."""
    return tuple(-letter for letter in reversed(w))


def concat(u, w):
    """Reduced product u·w."""
    u = list(u)
    i = len(w)
    for letter in w:
        if u and u[-1] == -letter:
            u.pop()
        else:
            u.append(letter)
    return tuple(u)


def concat_all(*ws):
    out = ()
    for w in ws:
        out = concat(out, w)
    return out


def power(w, k):
    if k < 0:
        w, k = invert(w), -k
    out = ()
    for _ in range(k):
        out = concat(out, w)
    return out


def conjugate(w, g):
    """g^-1 · w · g, reduced."""
    return concat(concat(invert(g), tuple(w)), g)


def cyclic_reduce(w):
    """Cyclically reduced core of w.

    Returns ``(core, p)`` with ``w = p · core · p^-1`` as reduced words.
    """
    w = reduce(w)
    p = []
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        p.append(w[lo])
        lo += 1
        hi -= 1
    return w[lo:hi], tuple(p)


def cyclic_normal_form(w):
    """Canonical representative of the conjugacy class of w.

    Cyclically reduces, then takes the rotation that is minimal under the
    letter order.  Two words are conjugate iff their normal forms coincide.
    """
    core, _ = cyclic_reduce(w)
    if len(core) <= 1:
        return core
    key = tuple(letter_key(letter) for letter in core)
    best = min(
        range(len(core)),
        key=lambda r: key[r:] + key[:r],
    )
    return core[best:] + core[:best]


def conjugate_related(u, w):
    """True iff u and w are conjugate in the free group."""
    return cyclic_normal_form(u) == cyclic_normal_form(w)


def find_conjugator(u, w):
    """A word g with g^-1 · u · g == w, or None if u, w are not conjugate.

    Built from the cyclic decompositions u = p·u0·p^-1, w = q·w0·q^-1 and a
    rotation offset k with rot_k(u0) == w0: then g = p · u0[:k] · q^-1.  The
    witness is verified before being returned.
    """
    u0, p = cyclic_reduce(u)
    w0, q = cyclic_reduce(w)
    if len(u0) != len(w0):
        return None
    n = len(u0)
    if n == 0:
        g = concat(p, invert(q))
        assert conjugate(u, g) == tuple(w)
        return g
    for k in range(n):
        if u0[k:] + u0[:k] == tuple(w0):
            g = concat_all(p, u0[:k], invert(q))
            assert conjugate(u, g) == reduce(w)
            return g
    return None


_ORIGIN = ord("a")


def parse_word(text, rank=DEFAULT_RANK):
    """Parse ``"abA"`` style text to a word; ``"1"`` is the empty word.

    Raises ValueError on characters outside the alphabet or letters beyond
    ``rank``.
    """
    text = text.strip()
    if text == "1" or text == "":
        return ()
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - _ORIGIN + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch.lower()) - _ORIGIN + 1))
        else:
            raise ValueError("bad character %r in word %r" % (ch, text))
    check_letters(letters, rank)
    return reduce(letters)


def letter_str(letter):
    if abs(letter) > 26:
        # no single-character encoding past z; fall back to a readable form
        return "x%d" % letter if letter > 0 else "X%d" % -letter
    ch = chr(_ORIGIN + abs(letter) - 1)
    return ch if letter > 0 else ch.upper()


def word_str(w):
    """Inverse of parse_word; the empty word renders as "1"."""
    if not w:
        return "1"
    return "".join(letter_str(letter) for letter in w)


def parse_words(text, rank=DEFAULT_RANK):
    """Parse a comma-separated list of words, e.g. ``"ab,b,c"``."""
    return tuple(parse_word(part, rank) for part in text.split(","))


def words_str(ws):
    return ",".join(word_str(w) for w in ws)
