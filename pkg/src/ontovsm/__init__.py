"""Generalized vector space retrieval over named entities and keywords."""
from .annotate import AnnotatedDoc, Annotation, Annotator, NESpan, Token, normalize_keyword, tokenize
from .index import Index, build_index, load_index, save_index, weight_doc, weight_query
from .kb import KBError, KnowledgeBase, ancestors, entities_by_name, entity_info, is_subclass, load_kb
from .search import ParsedQuery, RankedResult, parse_query, score_all, search
from .terms import Mode, Term, WhMap, emit_doc_terms, emit_query_terms, load_wh_map, wh_class

__version__ = "0.1.0"
