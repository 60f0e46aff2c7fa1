#!/usr/bin/env python3
"""Table of term counts per size and universe (α-classes, 3 free names)."""

from artifact.analysis import count_terms

print("size  lambda       j    void  closed-lambda")
for n in range(1, 11):
    print(f"{n:4d} {count_terms('lambda', n, 3):7d} {count_terms('j', n, 3):7d} "
          f"{count_terms('void', n, 3):7d} {count_terms('lambda', n, 0):7d}")
