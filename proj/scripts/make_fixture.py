"""Writes the pseudorandom byte fixture used by the corpus acceptance check.

Bytes are IID from English-like letter frequencies (plus space), so the
source has no long-range structure and its maximal repetition grows
logarithmically, as for a shuffled text.
"""

import argparse
import random

LETTERS = " etaoinshrdlcumwfgypbvkjxqz"
WEIGHTS = [18.0, 12.7, 9.1, 8.2, 7.5, 7.0, 6.7, 6.3, 6.1, 6.0, 4.3, 4.0, 2.8, 2.8,
           2.4, 2.4, 2.2, 2.0, 2.0, 1.9, 1.5, 1.0, 0.8, 0.15, 0.15, 0.1, 0.07]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("output")
    parser.add_argument("--size", type=int, default=1 << 20)
    parser.add_argument("--seed", type=int, default=20240601)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    data = "".join(rng.choices(LETTERS, weights=WEIGHTS, k=args.size))
    with open(args.output, "w", encoding="ascii", newline="") as f:
        f.write(data)


if __name__ == "__main__":
    main()
