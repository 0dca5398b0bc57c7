from pfaffsurf.complex import puncture
from pfaffsurf.generators import fixture


def punctured(name, face=0):
    return puncture(fixture(name), face)
