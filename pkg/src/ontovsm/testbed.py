"""A small hand-built testbed: KB, gazetteer, Wh map, 40 documents, 12 topics, qrels.

Topics fall into four groups. ``alias`` topics name an entity by a
different alias than the relevant documents use, ``class`` topics ask for
any member of a class, ``wh`` topics are questions whose interrogative
implies the answer class, and ``keyword`` topics carry no entity at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

KB_TEXT = """\
# classes
class Location
class City parent Location
class Country parent Location
class River parent Location
class State parent Location
class Organization
class CommercialOrganization parent Organization
class Company parent CommercialOrganization
class Bank parent CommercialOrganization
class University parent Organization
class Person
class Politician parent Person
class Scientist parent Person
class Datetime

# entities
entity City_SG class City name "Sài Gòn" alias "Thành phố Hồ Chí Minh" alias "TPHCM"
entity City_HN class City name "Hà Nội"
entity City_Paris_FR class City name "Paris"
entity City_Paris_TX class City name "Paris"
entity Univ_Paris class University name "Paris"
entity River_SG class River name "sông Sài Gòn"
entity Bank_SG class Bank name "ngân hàng Sài Gòn"
entity Country_TH class Country name "Thái Lan" alias "Thailand"
entity Country_VN class Country name "Việt Nam" alias "Vietnam"
entity Country_US class Country name "United States" alias "USA"
entity State_VA class State name "Virginia"
entity State_TX class State name "Texas"
entity Company_123 class Company name "Intel" alias "Intel Corporation"
entity Company_Nike class Company name "Nike"
entity Company_Sony class Company name "Sony"
entity Person_GW class Politician name "George Washington"
entity Person_Noyce class Scientist name "Robert Noyce"
entity Person_Moore class Scientist name "Gordon Moore"
entity Date_Feb22 class Datetime name "February 22"
"""

GAZETTEER_TEXT = """\
name "Brian M.Krzanich" class Person
name "Khu Công Nghệ Cao" class Location
"""

WH_MAP_TEXT = """\
wh where -> Location
wh who -> Person
wh whom -> Person
wh when -> Datetime
label "city" -> City
label "company" -> Company
"""

DOCS = [
    # alias: TPHCM traffic congestion
    ("LA001", "Traffic congestion in Thành phố Hồ Chí Minh worsened as motorbike numbers grew again."),
    ("LA002", "Officials in Sài Gòn proposed new bus lanes to ease traffic congestion downtown during rush hour."),
    ("LA003", "Traffic congestion in Hà Nội."),
    ("LA004", "Traffic congestion costs commuters hours every week."),
    # alias: Thailand protests
    ("LA005", "Thousands joined protests in Thái Lan against the new government."),
    ("LA006", "Student protests spread across Thái Lan campuses this week."),
    ("LA007", "Farmers staged protests over rice prices."),
    ("LA008", "Protests in Việt Nam."),
    # class: commercial sponsorship
    ("LA009", "Nike signed a sponsorship deal with the national football team."),
    ("LA010", "Sony announced sponsorship of the summer music festival."),
    ("LA011", "Ngân hàng Sài Gòn expanded its sponsorship of local schools."),
    ("LA012", "The charity is not a commercial organization and refuses sponsorship."),
    ("LA013", "Academic research sponsorship rules were tightened by the ministry."),
    # class: air pollution in a city
    ("LA014", "Air pollution in Hà Nội reached hazardous levels on Monday."),
    ("LA015", "Paris restricted cars in the centre to cut air pollution."),
    ("LA016", "Air pollution from city traffic is a health risk."),
    ("LA017", "Pollution of sông Sài Gòn threatens fish stocks."),
    # wh: where was George Washington born
    ("LA018", "As published, George Washington was born in Virginia."),
    ("LA019", "George Washington was born on February 22."),
    ("LA020", "George Washington led the Continental Army."),
    # wh: who founded Intel
    ("LA021", "Intel was founded by Robert Noyce and Gordon Moore in the valley."),
    ("LA022", "Intel founded a research lab in Texas."),
    # wh: which city hosts the Intel assembly plant
    ("LA023", "Intel Corporation opened an assembly plant in TPHCM."),
    ("LA024", "Intel assembly plant in Thái Lan."),
    # keyword topics
    ("LA025", "Rice export prices climbed after poor harvests."),
    ("LA026", "Exporters expect rice prices to stabilise next season."),
    ("LA027", "Monsoon rainfall forecast warns of floods in the delta."),
    ("LA028", "The weather bureau issued its monsoon forecast with heavy rainfall."),
    ("LA029", "Rainfall statistics for the last decade were published."),
    ("LA030", "Semiconductor chip testing equipment sales rose sharply."),
    ("LA031", "New methods for chip testing cut semiconductor defects."),
    ("LA032", "Football league results surprised fans at the weekend."),
    ("LA033", "The league published football results and standings."),
    ("LA034", "Vaccine research funding doubled this year."),
    ("LA035", "Governments pledged funding for vaccine research programs."),
    ("LA036", "Research funding for universities was cut."),
    # background
    ("LA037", "Brian M.Krzanich visited Khu Công Nghệ Cao to inspect new factory space."),
    ("LA038", "The USA and Vietnam signed a trade agreement."),
    ("LA039", "Texas ranchers reported a dry summer."),
    ("LA040", "Markets in the United States closed higher."),
]

TOPICS = [
    ("Q01", "TPHCM traffic congestion", "alias"),
    ("Q02", "Thailand protests", "alias"),
    ("Q03", "class:CommercialOrganization sponsorship", "class"),
    ("Q04", "class:City air pollution", "class"),
    ("Q05", "Where was George Washington born?", "wh"),
    ("Q06", "Who founded Intel?", "wh"),
    ("Q07", "Which city hosts the Intel assembly plant?", "wh"),
    ("Q08", "rice export prices", "keyword"),
    ("Q09", "monsoon rainfall forecast", "keyword"),
    ("Q10", "semiconductor chip testing", "keyword"),
    ("Q11", "football league results", "keyword"),
    ("Q12", "vaccine research funding", "keyword"),
]

QRELS = {
    "Q01": ["LA001", "LA002"],
    "Q02": ["LA005", "LA006"],
    "Q03": ["LA009", "LA010", "LA011"],
    "Q04": ["LA014", "LA015"],
    "Q05": ["LA018"],
    "Q06": ["LA021"],
    "Q07": ["LA023"],
    "Q08": ["LA025", "LA026"],
    "Q09": ["LA027", "LA028"],
    "Q10": ["LA030", "LA031"],
    "Q11": ["LA032", "LA033"],
    "Q12": ["LA034", "LA035"],
}


def trec_text(docs=DOCS) -> str:
    return "".join(f"<DOC>\n<DOCNO>{d}</DOCNO>\n<TEXT>\n{t}\n</TEXT>\n</DOC>\n" for d, t in docs)


def topics_text() -> str:
    return "".join(f"{q}\t{t}\n" for q, t, _ in TOPICS)


def qrels_text() -> str:
    lines = []
    for q, _, _ in TOPICS:
        rel = set(QRELS[q])
        for d, _ in DOCS:
            lines.append(f"{q} 0 {d} {int(d in rel)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TestbedFiles:
    root: Path
    kb: Path
    gazetteer: Path
    wh_map: Path
    corpus: Path
    topics: Path
    qrels: Path


def write_testbed(root) -> TestbedFiles:
    root = Path(root)
    (root / "corpus").mkdir(parents=True, exist_ok=True)
    files = TestbedFiles(root, root / "kb.txt", root / "gazetteer.txt", root / "wh_map.txt",
                         root / "corpus" / "la.trec", root / "topics.tsv", root / "qrels.txt")
    files.kb.write_text(KB_TEXT, encoding="utf-8")
    files.gazetteer.write_text(GAZETTEER_TEXT, encoding="utf-8")
    files.wh_map.write_text(WH_MAP_TEXT, encoding="utf-8")
    files.corpus.write_text(trec_text(), encoding="utf-8")
    files.topics.write_text(topics_text(), encoding="utf-8")
    files.qrels.write_text(qrels_text(), encoding="utf-8")
    return files


def load_testbed(log_base=None):
    """(kb, annotator, wh_map, index) built in memory."""
    from .annotate import Annotator, parse_gazetteer
    from .corpus import parse_trec
    from .index import build_index
    from .kb import parse_kb
    from .terms import parse_wh_map

    kb = parse_kb(KB_TEXT)
    annotator = Annotator(kb, parse_gazetteer(GAZETTEER_TEXT, kb))
    wh_map = parse_wh_map(WH_MAP_TEXT, kb)
    docs = [annotator.annotate(d.docno, d.text) for d in parse_trec(trec_text())]
    idx = build_index(docs, kb, normalize=annotator.keyword, log_base=log_base)
    return kb, annotator, wh_map, idx
