import pytest

from ontovsm.annotate import Annotator, parse_gazetteer
from ontovsm.kb import parse_kb
from ontovsm import testbed

INTEL_KB = """
class Organization
class CommercialOrganization parent Organization
class Company parent CommercialOrganization
class Location
class City parent Location
class River parent Location
class Country parent Location
class Bank parent CommercialOrganization
class University parent Organization
class Person
class Datetime
entity Company_123 class Company name "Intel"
entity Company_NIKE class Company name "NIKE"
entity Company_SONY class Company name "SONY"
entity City_SG class City name "Sài Gòn" alias "Thành phố Hồ Chí Minh" alias "TPHCM"
entity River_SG class River name "Sài Gòn"
entity Bank_SG class Bank name "Sài Gòn"
entity City_Paris1 class City name "Paris"
entity City_Paris2 class City name "Paris"
entity Univ_Paris class University name "Paris"
entity Country_TH class Country name "Thái Lan"
entity Loc_KCNC class Location name "Khu Công Nghệ Cao Sài Gòn"
entity Org_KCNC class Organization name "Khu Công Nghệ Cao Sài Gòn"
entity Person_GW class Person name "George Washington"
"""

GAZETTEER = 'name "Brian M.Krzanich" class Person\n'


@pytest.fixture(scope="session")
def kb():
    return parse_kb(INTEL_KB)


@pytest.fixture(scope="session")
def annotator(kb):
    return Annotator(kb, parse_gazetteer(GAZETTEER, kb))


@pytest.fixture(scope="session")
def bed():
    """(kb, annotator, wh_map, index) for the synthetic testbed."""
    return testbed.load_testbed()


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _criteria.append((marker.args[0], call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _criteria:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}")
