"""
Projectors and where they must point
====================================

Receivers 1 and 2 send instantaneous CSIT, receiver 3 delayed.
"""
from hybrid_csit import draw_channel, run_scheme, oracle_decodable, ppd33
from hybrid_csit import numerics as nx

real = draw_channel(seed=4, M=3, K=3, T=4, mode="exact")
tr = run_scheme(ppd33(), real)

# first two slots: receiver 1 sees only a-symbols, receiver 2 only b-symbols
cols = {k: [j for j, n in enumerate(tr.symbol_names) if n[0] not in p]
        for k, p in ((1, "a"), (2, "b"))}
for k in (1, 2):
    print(f"receiver {k}, slots 1-2, foreign coefficients all zero:", nx.is_zero(tr.G[k][:2][:, cols[k]]))

# receiver 3 rebuilds c from four slots of aligned interference
print("receiver 3 decodes", sorted(oracle_decodable(tr, 3)))

# reusing the first slot's projector for c in slot 2 leaks c into receivers 1 and 2
bad = run_scheme(ppd33("printed"), real)
for k in (1, 2, 3):
    print(f"stale projector, receiver {k}: missing {sorted(bad.targets[k] - oracle_decodable(bad, k))}")
