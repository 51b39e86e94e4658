#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

Alphanumeric ranges follow str.isalnum(). The fold table holds the simple
(single code point) case folding: casefold() when it yields one code point,
otherwise lower() when that yields one code point.
"""
import sys
import unicodedata

MAX_CP = 0x110000


def alnum_ranges():
    ranges = []
    start = None
    for cp in range(MAX_CP):
        ok = 0xD800 > cp or cp > 0xDFFF
        ok = ok and chr(cp).isalnum()
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, MAX_CP - 1))
    return ranges


def simple_fold(cp):
    c = chr(cp)
    folded = c.casefold()
    if len(folded) == 1:
        return ord(folded)
    lowered = c.lower()
    if len(lowered) == 1:
        return ord(lowered)
    return cp


def fold_pairs():
    pairs = []
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        f = simple_fold(cp)
        if f != cp:
            pairs.append((cp, f))
    return pairs


def main(out_path):
    with open(out_path, "w", encoding="ascii", newline="\n") as out:
        out.write("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n"
                  % unicodedata.unidata_version)
        out.write("// clang-format off\n")
        out.write("inline constexpr CodeRange kAlnumRanges[] = {\n")
        for lo, hi in alnum_ranges():
            out.write("    {0x%X, 0x%X},\n" % (lo, hi))
        out.write("};\n\n")
        out.write("inline constexpr FoldPair kFoldPairs[] = {\n")
        for cp, f in fold_pairs():
            out.write("    {0x%X, 0x%X},\n" % (cp, f))
        out.write("};\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")
