#!/usr/bin/env python3
# Copyright 2026 The oie-eval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates include/oie/unicode_tables.inc from Python's unicodedata.

Punctuation is every code point in a P* general category plus the ASCII
characters of string.punctuation (which adds symbols such as ` $ + < = > ^ | ~).
Lowercasing keeps only one-to-one simple mappings.
"""

import string
import sys
import unicodedata


def ranges(points):
    out = []
    for cp in points:
        if out and out[-1][1] + 1 == cp:
            out[-1][1] = cp
        else:
            out.append([cp, cp])
    return out


def main():
    punct = set(ord(c) for c in string.punctuation)
    lower = []
    for cp in range(0x110000):
        ch = chr(cp)
        if unicodedata.category(ch).startswith("P"):
            punct.add(cp)
        low = ch.lower()
        if len(low) == 1 and low != ch:
            lower.append((cp, ord(low)))

    w = sys.stdout.write
    w("// Generated by tools/gen_unicode_tables.py from Unicode %s. Do not edit.\n"
      % unicodedata.unidata_version)
    w("// clang-format off\n")
    w("inline constexpr CodeRange kPunctuationRanges[] = {\n")
    for lo, hi in ranges(sorted(punct)):
        w("    {0x%04X, 0x%04X},\n" % (lo, hi))
    w("};\n\n")
    w("inline constexpr CaseMapping kLowercaseMappings[] = {\n")
    for src, dst in lower:
        w("    {0x%04X, 0x%04X},\n" % (src, dst))
    w("};\n")
    w("// clang-format on\n")


if __name__ == "__main__":
    main()
