"""Constructed single-step scenarios for the new-tree admission result.

A window of capacity ``B`` holds ``B - 1`` samples with distinct feature
values. ``m`` fully grown incumbents are trained on the full window with the
label of the arriving sample ``x_B`` replaced by a wrong class, so each is
perfect on the first ``B - 1`` samples and wrong on ``x_B``. The incumbents
start with uniform weights. One ensemble step on ``(x_B, y_B)`` then grows a
new fully grown shrub that is perfect on the whole window.

With a common wrong class the residual at ``x_B`` is ``e_wrong - e_y``, each
incumbent's weight drops by ``2 alpha / (B C)`` and the newcomer gets
``2 alpha / (B C)``. For ``alpha > B C / (4 m)`` the newcomer outweighs every
incumbent, so it survives projection and, when the ensemble is full, the
last incumbent in the stable order (a minimum-weight member) is evicted.

With incumbents wrong in *different* classes the incumbent gradient shrinks
(``(f - y) . h_j`` falls below 1) and the newcomer can lose.
"""
import numpy as np

from shrubs import EnsembleConfig, RngHandle, ShrubConfig, ShrubEnsemble, fit_shrub

FULL = ShrubConfig(fully_grown=True)


def build(B, C, m, M=4, alpha=None, distinct_wrong=False, seed=0, d=3):
    rng = np.random.default_rng(seed * 1000 + B * 100 + C * 10 + m)
    X = rng.permutation(B * d).reshape(B, d).astype(float)
    y = rng.integers(0, C, size=B)
    incumbents = []
    for j in range(m):
        wrong = (y[-1] + 1 + (j if distinct_wrong else 0)) % C
        if wrong == y[-1]:
            wrong = (wrong + 1) % C
        relabeled = y.copy()
        relabeled[-1] = wrong
        incumbents.append(fit_shrub((X, relabeled), FULL, C, RngHandle(j)))
    if alpha is None:
        alpha = 1.01 * B * C / (4 * m)
    cfg = EnsembleConfig(
        n_classes=C, max_members=M, window_size=B, step_size=alpha, shrub=FULL
    )
    ens = ShrubEnsemble(cfg, n_features=d)
    for x, label in zip(X[:-1], y[:-1]):
        ens.window.push(x, int(label))
    ens.set_members(incumbents, np.full(m, 1.0 / m))
    return ens, incumbents, X, y


def run(B, C, m, M=4, **kw):
    """Step once and report what happened.

    Returns a dict with the precondition checks and the outcome.
    """
    ens, incumbents, X, y = build(B, C, m, M, **kw)
    xb, yb = X[-1], int(y[-1])
    pre_weights = ens.weights.copy()
    # minimum pre-step weight, last index on ties (stable decreasing order)
    pre_min = max(i for i in range(m) if pre_weights[i] == pre_weights.min())
    all_wrong = all(int(np.argmax(h.predict(xb))) != yb for h in incumbents) and all(
        set(h.predict(xb)) <= {0.0, 1.0} for h in incumbents
    )
    ens.step(xb, yb)
    inc_ids = {id(h) for h in incumbents}
    new = [s for s in ens.shrubs if id(s) not in inc_ids]
    Xw, yw = ens.window.arrays()
    # the newcomer is rebuilt here to check the perfect-fit precondition
    newcomer_perfect = True
    probe = fit_shrub((Xw, yw), FULL, C, RngHandle(0))
    for x, label in zip(Xw, yw):
        newcomer_perfect &= bool(np.array_equal(probe.predict(x), np.eye(C)[label]))
    survivors = {id(s) for s in ens.shrubs}
    return {
        "all_wrong": all_wrong,
        "newcomer_perfect": newcomer_perfect,
        "added": len(new) == 1,
        "evicted": [i for i, h in enumerate(incumbents) if id(h) not in survivors],
        "pre_min": pre_min,
        "members": len(ens.shrubs),
    }


def holds(B, C, m, M=4, **kw):
    r = run(B, C, m, M, **kw)
    if not (r["all_wrong"] and r["newcomer_perfect"]):
        return False
    if m < M:
        return r["added"] and r["evicted"] == []
    return r["added"] and r["evicted"] == [r["pre_min"]]
