"""scikit-learn compatible wrappers.

Inputs are stacks of density matrices, shape ``(n, 3, 3)``, or Bloch
features, shape ``(n, 12)``, so that :class:`BlochEncoder` can sit in front
of the classifiers in a :class:`~sklearn.pipeline.Pipeline`.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .classicality import classify_batch
from .oracles import embed_symmetric_two_qubit, ppt_min_eig
from .states import BlochPair, bloch_from_rho, rho_from_bloch
from .validation import as_state_batch, check_density_matrix, check_tolerance

LABELS = np.array(["boundary", "inside", "nonphysical", "outside"], dtype=object)


class BlochEncoder(TransformerMixin, BaseEstimator):
    """Density matrices to 12 real features ``[u, W.ravel()]`` and back."""

    def __init__(self, tol=1e-9, renormalize=False):
        self.tol = tol
        self.renormalize = renormalize

    def fit(self, X, y=None):
        check_tolerance(self.tol)
        check_density_matrix(X, self.tol, self.renormalize)
        self.n_features_out_ = 12
        return self

    def transform(self, X):
        check_is_fitted(self)
        return bloch_from_rho(X, self.tol, self.renormalize).as_features()

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = np.asarray(X, dtype=float)
        return rho_from_bloch(BlochPair(X[:, :3], X[:, 3:].reshape(-1, 3, 3)))


class ClassicalityClassifier(ClassifierMixin, BaseEstimator):
    """Labels states ``inside`` / ``boundary`` / ``outside`` the classical set.

    Nothing is learned: ``fit`` only validates parameters. States outside
    the physical set are labelled ``nonphysical``. ``decision_function`` is
    the smallest eigenvalue of ``Z = W - u u^T``.
    """

    def __init__(self, tol=1e-9):
        self.tol = tol

    def fit(self, X=None, y=None):
        check_tolerance(self.tol)
        self.classes_ = LABELS
        return self

    def decision_function(self, X):
        check_is_fitted(self)
        return classify_batch(as_state_batch(X, self.tol), self.tol)[3]

    def predict(self, X):
        check_is_fitted(self)
        return classify_batch(as_state_batch(X, self.tol), self.tol)[1]

    def predict_physical(self, X):
        check_is_fitted(self)
        return classify_batch(as_state_batch(X, self.tol), self.tol)[0]


class PPTClassifier(ClassifierMixin, BaseEstimator):
    """Same labels from the partial-transpose test on the symmetric two-qubit embedding."""

    def __init__(self, tol=1e-9):
        self.tol = tol

    def fit(self, X=None, y=None):
        check_tolerance(self.tol)
        self.classes_ = LABELS
        return self

    def decision_function(self, X):
        check_is_fitted(self)
        rho = rho_from_bloch(as_state_batch(X, self.tol))
        return ppt_min_eig(embed_symmetric_two_qubit(rho, self.tol))

    def predict(self, X):
        lam = self.decision_function(X)
        physical = classify_batch(as_state_batch(X, self.tol), self.tol)[0]
        out = np.full(lam.shape, "boundary", dtype=object)
        out[lam > self.tol] = "inside"
        out[lam < -self.tol] = "outside"
        out[physical == "outside"] = "nonphysical"
        return out
