import sys
from typing import List

import numpy as np

verbose = False


def printProgressBar(
    iteration,
    total,
    prefix="",
    suffix="",
    decimals=1,
    length=50,
    fill="█",
    printEnd="\r",
):
    """
    Call in a loop to create terminal progress bar on stderr
    @params:
        iteration   - Required  : current iteration (Int)
        total       - Required  : total iterations (Int)
        prefix      - Optional  : prefix string (Str)
        suffix      - Optional  : suffix string (Str)
        decimals    - Optional  : positive number of decimals in percent complete (Int)
        length      - Optional  : character length of bar (Int)
        fill        - Optional  : bar fill character (Str)
        printEnd    - Optional  : end character (e.g. "\r", "\r\n") (Str)
    """
    if not verbose or total <= 0:
        return
    percent = ("{0:." + str(decimals) + "f}").format(100 * (iteration / float(total)))
    filledLength = int(length * iteration // total)
    bar = fill * filledLength + "-" * (length - filledLength)
    print(f"\r{prefix} |{bar}| {percent}% {suffix}", end=printEnd, file=sys.stderr)
    # Print New Line on Complete
    if iteration == total:
        print(file=sys.stderr)


def log(msg: str):
    if verbose:
        print(msg, file=sys.stderr)


def warn(msg: str):
    print("WARNING: %s" % msg, file=sys.stderr)


def rng_for(seed: int, index: int) -> np.random.Generator:
    """Independent stream for replicate `index` of a run seeded with `seed`."""
    return np.random.default_rng([int(seed), int(index)])


def parse_float_list(text: str) -> List[float]:
    return [float(v) for v in text.split(",") if v.strip() != ""]
