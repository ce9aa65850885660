use crate::error::Result;
use crate::forms::kform::KForm;
use crate::forms::matform::MatForm;
use crate::jet::Jet;

/// A quaternion-valued form `A + B·j`.
#[derive(Clone, Debug)]
pub struct QForm {
    pub a: KForm,
    pub b: KForm,
}

impl QForm {
    pub fn new(a: KForm, b: KForm) -> Self {
        QForm { a, b }
    }

    /// The function `a + b·j`.
    pub fn function(dim: usize, a: Jet, b: Jet) -> Self {
        QForm { a: KForm::scalar(dim, a), b: KForm::scalar(dim, b) }
    }

    pub fn degree(&self) -> usize {
        self.a.degree()
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `(A + B·j) ∧ (C + D·j) = (A∧C − B∧D̄) + (A∧D + B∧C̄)·j`.
    pub fn qwedge(&self, other: &QForm) -> Result<QForm> {
        let a = self.a.wedge(&other.a)?.sub(&self.b.wedge(&other.b.conj())?)?;
        let b = self.a.wedge(&other.b)?.add(&self.b.wedge(&other.a.conj())?)?;
        Ok(QForm { a, b })
    }

    pub fn to_mat(&self) -> MatForm {
        MatForm {
            e: [[self.a.clone(), self.b.clone()], [self.b.conj().neg(), self.a.conj()]],
        }
    }

    pub fn d(&self) -> QForm {
        QForm { a: self.a.d(), b: self.b.d() }
    }

    pub fn add(&self, other: &QForm) -> Result<QForm> {
        Ok(QForm { a: self.a.add(&other.a)?, b: self.b.add(&other.b)? })
    }

    pub fn sub(&self, other: &QForm) -> Result<QForm> {
        Ok(QForm { a: self.a.sub(&other.a)?, b: self.b.sub(&other.b)? })
    }

    pub fn neg(&self) -> QForm {
        QForm { a: self.a.neg(), b: self.b.neg() }
    }

    /// Quaternionic conjugate `Ā − B·j`; embeds as the adjoint matrix.
    pub fn qconj(&self) -> QForm {
        QForm { a: self.a.conj(), b: self.b.neg() }
    }

    /// Trace of the embedded matrix, `A + Ā`.
    pub fn trace(&self) -> KForm {
        self.a.add(&self.a.conj()).expect("same chart and degree")
    }

    pub fn max_diff(&self, other: &QForm) -> f64 {
        self.a.max_diff(&other.a).max(self.b.max_diff(&other.b))
    }
}
