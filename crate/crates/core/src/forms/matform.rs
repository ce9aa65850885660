use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::forms::kform::KForm;
use crate::jet::Jet;

/// A 2×2 matrix of forms of a common degree.
#[derive(Clone, Debug)]
pub struct MatForm {
    pub e: [[KForm; 2]; 2],
}

impl MatForm {
    pub fn new(e: [[KForm; 2]; 2]) -> Result<Self> {
        let (dim, deg) = (e[0][0].dim(), e[0][0].degree());
        for row in &e {
            for x in row {
                if x.dim() != dim {
                    return Err(Error::ChartMismatch(dim, x.dim()));
                }
                if x.degree() != deg {
                    return Err(Error::Invalid("matrix entries of mixed degree".into()));
                }
            }
        }
        Ok(MatForm { e })
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        let z = KForm::zero(dim, degree);
        MatForm { e: [[z.clone(), z.clone()], [z.clone(), z]] }
    }

    /// A matrix of functions (0-forms).
    pub fn functions(dim: usize, m: [[Jet; 2]; 2]) -> Self {
        MatForm { e: m.map(|row| row.map(|c| KForm::scalar(dim, c))) }
    }

    pub fn identity(dim: usize) -> Self {
        let (o, z) = (Jet::real(1.0), Jet::real(0.0));
        MatForm::functions(dim, [[o, z], [z, o]])
    }

    pub fn dim(&self) -> usize {
        self.e[0][0].dim()
    }

    pub fn degree(&self) -> usize {
        self.e[0][0].degree()
    }

    fn zip(&self, other: &MatForm, f: impl Fn(&KForm, &KForm) -> Result<KForm>) -> Result<MatForm> {
        Ok(MatForm {
            e: [
                [f(&self.e[0][0], &other.e[0][0])?, f(&self.e[0][1], &other.e[0][1])?],
                [f(&self.e[1][0], &other.e[1][0])?, f(&self.e[1][1], &other.e[1][1])?],
            ],
        })
    }

    pub fn map(&self, f: impl Fn(&KForm) -> KForm) -> MatForm {
        MatForm { e: [[f(&self.e[0][0]), f(&self.e[0][1])], [f(&self.e[1][0]), f(&self.e[1][1])]] }
    }

    pub fn add(&self, other: &MatForm) -> Result<MatForm> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &MatForm) -> Result<MatForm> {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> MatForm {
        self.map(|x| x.neg())
    }

    pub fn scale_c(&self, s: C64) -> MatForm {
        self.map(|x| x.scale_c(s))
    }

    /// Matrix product with entries composed by the wedge product.
    pub fn wedge(&self, other: &MatForm) -> Result<MatForm> {
        let mut e: [[Option<KForm>; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                let a = self.e[i][0].wedge(&other.e[0][j])?;
                let b = self.e[i][1].wedge(&other.e[1][j])?;
                e[i][j] = Some(a.add(&b)?);
            }
        }
        Ok(MatForm { e: e.map(|row| row.map(|x| x.expect("filled"))) })
    }

    pub fn d(&self) -> MatForm {
        self.map(|x| x.d())
    }

    pub fn del(&self) -> MatForm {
        self.map(|x| x.del())
    }

    pub fn delbar(&self) -> MatForm {
        self.map(|x| x.delbar())
    }

    pub fn trace(&self) -> KForm {
        self.e[0][0].add(&self.e[1][1]).expect("entries share chart and degree")
    }

    pub fn transpose(&self) -> MatForm {
        let e = &self.e;
        MatForm { e: [[e[0][0].clone(), e[1][0].clone()], [e[0][1].clone(), e[1][1].clone()]] }
    }

    /// Entrywise conjugate of the transpose.
    pub fn adjoint(&self) -> MatForm {
        self.transpose().map(|x| x.conj())
    }

    pub fn type_project(&self, p: usize, q: usize) -> Result<MatForm> {
        let f = |x: &KForm| x.type_project(p, q);
        Ok(MatForm {
            e: [[f(&self.e[0][0])?, f(&self.e[0][1])?], [f(&self.e[1][0])?, f(&self.e[1][1])?]],
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.e.iter().flatten().map(|x| x.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &MatForm) -> f64 {
        (0..4).map(|k| self.e[k / 2][k % 2].max_diff(&other.e[k / 2][k % 2])).fold(0.0, f64::max)
    }
}
