//! Fourier–Motzkin elimination for mixed systems of linear equalities,
//! weak and strict inequalities over ℚ.

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    /// `⟨a, x⟩ + c = 0`
    Eq,
    /// `⟨a, x⟩ + c ≥ 0`
    Ge,
    /// `⟨a, x⟩ + c > 0`
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub coef: Vec<Q>,
    pub constant: Q,
    pub rel: Rel,
}

impl Row {
    pub fn new(coef: Vec<Q>, constant: Q, rel: Rel) -> Row {
        Row {
            coef,
            constant,
            rel,
        }
    }

    fn is_constant(&self) -> bool {
        self.coef.iter().all(Zero::is_zero)
    }

    fn constant_holds(&self) -> bool {
        match self.rel {
            Rel::Eq => self.constant.is_zero(),
            Rel::Ge => !self.constant.is_negative(),
            Rel::Gt => self.constant.is_positive(),
        }
    }

    /// Positive rescaling making the first nonzero entry ±1 (+1 for equalities).
    fn normalized(mut self) -> Row {
        let lead = self
            .coef
            .iter()
            .chain(std::iter::once(&self.constant))
            .find(|x| !x.is_zero())
            .cloned();
        if let Some(l) = lead {
            let s = if self.rel == Rel::Eq { l } else { l.abs() };
            for x in self.coef.iter_mut() {
                *x /= &s;
            }
            self.constant /= &s;
        }
        self
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.coef
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn holds_at(&self, x: &[Q]) -> bool {
        let v = self.eval(x);
        match self.rel {
            Rel::Eq => v.is_zero(),
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        }
    }
}

/// A conjunction of rows over a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub nvars: usize,
    pub rows: Vec<Row>,
    /// Set once a constant row is found false.
    pub infeasible: bool,
}

impl System {
    pub fn new(nvars: usize) -> System {
        System {
            nvars,
            rows: Vec::new(),
            infeasible: false,
        }
    }

    pub fn push(&mut self, row: Row) {
        debug_assert_eq!(row.coef.len(), self.nvars);
        if row.is_constant() {
            if !row.constant_holds() {
                self.infeasible = true;
            }
            return;
        }
        let row = row.normalized();
        if !self.rows.contains(&row) {
            self.rows.push(row);
        }
    }

    /// Eliminates the variable at `var`, removing its column.
    pub fn eliminate(&self, var: usize) -> System {
        let mut out = System::new(self.nvars - 1);
        out.infeasible = self.infeasible;
        let drop_col = |r: &Row| -> Row {
            let mut coef = r.coef.clone();
            coef.remove(var);
            Row::new(coef, r.constant.clone(), r.rel)
        };
        // substitute through an equality when one mentions the variable
        if let Some(eq) = self
            .rows
            .iter()
            .find(|r| r.rel == Rel::Eq && !r.coef[var].is_zero())
        {
            let piv = eq.coef[var].clone();
            for r in &self.rows {
                if std::ptr::eq(r, eq) {
                    continue;
                }
                if r.coef[var].is_zero() {
                    out.push(drop_col(r));
                    continue;
                }
                let f = &r.coef[var] / &piv;
                let coef: Vec<Q> = r
                    .coef
                    .iter()
                    .zip(&eq.coef)
                    .map(|(a, b)| a - &f * b)
                    .collect();
                let constant = &r.constant - &f * &eq.constant;
                out.push(drop_col(&Row::new(coef, constant, r.rel)));
            }
            return out;
        }
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for r in &self.rows {
            let a = &r.coef[var];
            if a.is_zero() {
                out.push(drop_col(r));
            } else if a.is_positive() {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }
        for p in &pos {
            for n in &neg {
                let wp = -n.coef[var].clone();
                let wn = p.coef[var].clone();
                let coef: Vec<Q> = p
                    .coef
                    .iter()
                    .zip(&n.coef)
                    .map(|(a, b)| a * &wp + b * &wn)
                    .collect();
                let constant = &p.constant * &wp + &n.constant * &wn;
                let rel = if p.rel == Rel::Gt || n.rel == Rel::Gt {
                    Rel::Gt
                } else {
                    Rel::Ge
                };
                out.push(drop_col(&Row::new(coef, constant, rel)));
            }
        }
        out
    }

    /// Projects onto the first `keep` variables.
    pub fn project(&self, keep: usize) -> System {
        let mut s = self.clone();
        while s.nvars > keep {
            s = s.eliminate(s.nvars - 1);
            if s.infeasible {
                s.rows.clear();
            }
        }
        s
    }

    pub fn is_feasible(&self) -> bool {
        let s = self.project(0);
        !s.infeasible
    }
}
