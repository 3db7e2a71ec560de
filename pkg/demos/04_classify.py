"""
Classifying knots in bulk
=========================

"""

from collections import Counter

from montesinos.classifier import classify, cross_check, enumerate_and_classify, summarize
from montesinos.tangles import parse_knot

for lit in ["K(1/4, 1/5, 2/5)", "K(1/3, 1/3, 5/7)", "K(1/2, 1/5, 1/5)"]:
    c = classify(parse_knot(lit))
    print(lit, c.verdict.value, c.source or c.family)

print(cross_check(parse_knot("K(1/3, 1/3, 3/7)")))

# every knot with q_i <= 7, one per permutation/mirror class
rows = list(enumerate_and_classify(7, jobs=2))
print(summarize(rows))
print(Counter(r.classification.certificate.regime for r in rows if r.classification.certificate))
