"""Independent reference implementations used only by the tests.

These deliberately share no code with the package: dense numpy vectors for
cosine ranking, and plain counting for the effectiveness measures.
"""
import numpy as np


def dense_cosine(doc_multisets, query, log=np.log):
    """Rank documents by direct evaluation of cosine over tf.idf vectors.

    ``doc_multisets`` is a list of (docno, {term: tf}); ``query`` maps term -> qtf.
    Returns [(docno, score)] sorted by score desc, docno asc, zero scores dropped.
    """
    vocab = sorted({t for _, counts in doc_multisets for t in counts})
    if not vocab:
        return []
    col = {t: j for j, t in enumerate(vocab)}
    n = len(doc_multisets)
    tf = np.zeros((n, len(vocab)))
    for i, (_, counts) in enumerate(doc_multisets):
        for t, c in counts.items():
            tf[i, col[t]] = c
    df = (tf > 0).sum(axis=0)
    idf = log(n / df)
    w = tf * idf
    q = np.zeros(len(vocab))
    for t, c in query.items():
        if t in col:
            q[col[t]] = c * idf[col[t]]
    qn = np.sqrt((q ** 2).sum())
    if qn == 0:
        return []
    out = []
    for i, (docno, _) in enumerate(doc_multisets):
        dot = float(w[i] @ q)
        if dot > 0:
            out.append((docno, dot / (np.sqrt((w[i] ** 2).sum()) * qn)))
    out.sort(key=lambda e: (-e[1], e[0]))
    return out


def naive_precision_at_k(ranking, relevant, k):
    hits = 0
    for pos in range(k):
        if pos < len(ranking) and ranking[pos] in relevant:
            hits += 1
    return hits / k


def naive_average_precision(ranking, relevant):
    precisions = []
    for pos in range(len(ranking)):
        if ranking[pos] in relevant:
            top = ranking[:pos + 1]
            precisions.append(len([d for d in top if d in relevant]) / len(top))
    return sum(precisions) / len(relevant)
