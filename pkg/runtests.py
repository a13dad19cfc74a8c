import sys

import pytest


def runtests():
    failures = pytest.main(["mixdescent"])
    sys.exit(bool(failures))


if __name__ == "__main__":
    runtests()
