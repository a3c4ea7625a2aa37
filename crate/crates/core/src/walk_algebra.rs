//! First-return / first-transit generating functions of the open 2-point graph.
//!
//! Index `o` refers to the incoming external vertex and `b` to the outgoing
//! one; `oo(t)` is the probability that a walk started at `I` is back at `I`
//! at time `t` for the first time without visiting `O`, and so on. All
//! recursions are generic over [`Algebra`], so the same code evaluates exact
//! rational series, float series and scalars.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::series::{Algebra, Field, RationalSeries, TruncatedSeries};
use crate::tree::{MelonTree, NodeId};

/// 2×2 matrix over an algebra, basis (o, b).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbMatrix2<A> {
    pub oo: A,
    pub ob: A,
    pub bo: A,
    pub bb: A,
}

impl<A: Algebra> ProbMatrix2<A> {
    /// Bare line: one step from either end to the other.
    pub fn bare(y: &A) -> Self {
        ProbMatrix2 { oo: y.scalar(0), ob: y.clone(), bo: y.clone(), bb: y.scalar(0) }
    }

    pub fn identity(like: &A) -> Self {
        ProbMatrix2 { oo: like.scalar(1), ob: like.scalar(0), bo: like.scalar(0), bb: like.scalar(1) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ProbMatrix2 {
            oo: self.oo.mul(&o.oo).add(&self.ob.mul(&o.bo)),
            ob: self.oo.mul(&o.ob).add(&self.ob.mul(&o.bb)),
            bo: self.bo.mul(&o.oo).add(&self.bb.mul(&o.bo)),
            bb: self.bo.mul(&o.ob).add(&self.bb.mul(&o.bb)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ProbMatrix2 { oo: self.oo.add(&o.oo), ob: self.ob.add(&o.ob), bo: self.bo.add(&o.bo), bb: self.bb.add(&o.bb) }
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.oo.mul(&self.bb).sub(&self.ob.mul(&self.bo));
        let inv = det.inv()?;
        let zero = det.scalar(0);
        Ok(ProbMatrix2 {
            oo: self.bb.mul(&inv),
            ob: zero.sub(&self.ob).mul(&inv),
            bo: zero.sub(&self.bo).mul(&inv),
            bb: self.oo.mul(&inv),
        })
    }
}

/// Matrix of one node given its sub-melons: `m0` sits in the slot of the
/// node's own color, `others` in the remaining `D` slots.
fn node_matrix<A: Algebra>(
    dim: usize,
    y: &A,
    m0: &ProbMatrix2<A>,
    others: &[&ProbMatrix2<A>],
) -> Result<ProbMatrix2<A>> {
    let zero = y.scalar(0);
    let (mut soo, mut sob, mut sbo, mut sbb) = (zero.clone(), zero.clone(), zero.clone(), zero.clone());
    for m in others {
        soo = soo.add(&m.oo);
        sob = sob.add(&m.ob);
        sbo = sbo.add(&m.bo);
        sbb = sbb.add(&m.bb);
    }
    let d1 = y.scalar(dim as i64 + 1);
    let k = ProbMatrix2 { oo: d1.sub(&soo).sub(&m0.oo), ob: zero.sub(&sob), bo: zero.sub(&sbo), bb: d1.sub(&sbb) };
    let l = ProbMatrix2 { oo: zero.clone(), ob: y.clone(), bo: m0.bo.clone(), bb: zero.clone() };
    let r = ProbMatrix2 { oo: zero.clone(), ob: m0.ob.clone(), bo: y.clone(), bb: zero.clone() };
    let base = ProbMatrix2 { oo: zero.clone(), ob: zero.clone(), bo: zero.clone(), bb: m0.bb.clone() };
    Ok(base.add(&l.mul(&k.inverse()?).mul(&r)))
}

/// Bottom-up evaluation of a per-node recursion. `f(node, own, others)`
/// receives the value of the sub-melon in the node's own-color slot and the
/// values in the other slots (`None` for empty slots).
fn fold_tree<T, F>(tree: &MelonTree, mut f: F) -> Result<T>
where
    F: FnMut(NodeId, Option<&T>, Vec<Option<&T>>) -> Result<T>,
{
    let n = tree.len();
    let mut vals: Vec<Option<T>> = (0..n).map(|_| None).collect();
    for i in (0..n).rev() {
        let v = NodeId(i as u32);
        let c = tree.color(v).index();
        let row: Vec<Option<NodeId>> = tree.slot_row(v).collect();
        let val = {
            let own = row[c].map(|u| vals[u.index()].as_ref().expect("children evaluated first"));
            let others = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != c)
                .map(|(_, s)| s.map(|u| vals[u.index()].as_ref().expect("children evaluated first")))
                .collect();
            f(v, own, others)?
        };
        for u in row.into_iter().flatten() {
            vals[u.index()] = None;
        }
        vals[i] = Some(val);
    }
    Ok(vals.swap_remove(0).expect("root evaluated"))
}

/// First-return / first-transit matrix with `y` substituted for the step
/// variable.
pub fn first_return_matrix_at<A: Algebra>(tree: &MelonTree, y: &A) -> Result<ProbMatrix2<A>> {
    let dim = tree.dim();
    let bare = ProbMatrix2::bare(y);
    fold_tree(tree, |_, own, others| {
        let m0 = own.unwrap_or(&bare);
        let others: Vec<&ProbMatrix2<A>> = others.into_iter().map(|o| o.unwrap_or(&bare)).collect();
        node_matrix(dim, y, m0, &others)
    })
}

/// Exact rational series of the first-return matrix up to `y^order`.
pub fn first_return_matrix(tree: &MelonTree, order: usize) -> Result<ProbMatrix2<RationalSeries>> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    first_return_matrix_at(tree, &RationalSeries::var(order))
}

/// `(1 - P1)^{-1}`: generating function of all returns and transits.
pub fn return_matrix<A: Algebra>(p1: &ProbMatrix2<A>) -> Result<ProbMatrix2<A>> {
    let zero = p1.oo.scalar(0);
    let neg = ProbMatrix2 { oo: zero.sub(&p1.oo), ob: zero.sub(&p1.ob), bo: zero.sub(&p1.bo), bb: zero.sub(&p1.bb) };
    ProbMatrix2::identity(&zero).add(&neg).inverse()
}

fn require_simple(tree: &MelonTree) -> Result<()> {
    if tree.is_simple() {
        Ok(())
    } else {
        Err(Error::NotSimple)
    }
}

/// Scalar eigenvalue recursion `λ = y² / (D + 1 - Σ λ_i)` with `λ = y` on
/// bare lines.
pub fn lambda_simple<A: Algebra>(tree: &MelonTree, y: &A) -> Result<A> {
    require_simple(tree)?;
    let d1 = y.scalar(tree.dim() as i64 + 1);
    let y2 = y.mul(y);
    fold_tree(tree, |_, _, others| {
        let mut s = y.scalar(0);
        for o in others {
            s = s.add(o.unwrap_or(y));
        }
        y2.div(&d1.sub(&s))
    })
}

/// `h = (1 + y + S) / (1 + (1 - y) S)`, `S` the sum over sub-melons, with
/// `h = 1` on bare lines.
pub fn h_value<A: Algebra>(tree: &MelonTree, y: &A) -> Result<A> {
    require_simple(tree)?;
    let one = y.scalar(1);
    let one_minus_y = one.sub(y);
    let num_base = one.add(y);
    fold_tree(tree, |_, _, others| {
        let mut s = y.scalar(0);
        for o in others {
            s = s.add(o.unwrap_or(&one));
        }
        num_base.add(&s).div(&one.add(&one_minus_y.mul(&s)))
    })
}

/// Exact `h(1)`.
pub fn h_at_one(tree: &MelonTree) -> Result<BigRational> {
    h_value(tree, &BigRational::from_i64(1))
}

/// Derivatives `h^{(0)}, ..., h^{(max_n)}` at `y = 1`, from the Taylor
/// expansion of the recursion in `ε = y - 1`.
pub fn per_tree_h_derivatives(tree: &MelonTree, max_n: usize) -> Result<Vec<BigRational>> {
    if max_n > 4 {
        return Err(Error::InvalidArgument("derivative order above 4".into()));
    }
    let order = max_n.max(1);
    let one = RationalSeries::one(order);
    let two = one.scalar(2);
    let eps = RationalSeries::var(order);
    require_simple(tree)?;
    let series = fold_tree(tree, |_, _, others| {
        let mut s = RationalSeries::zero(order);
        for o in others {
            s = s.add(o.unwrap_or(&one));
        }
        two.add(&eps).add(&s).div(&one.sub(&eps.mul(&s)))
    })?;
    let mut out = Vec::with_capacity(max_n + 1);
    let mut fact = BigRational::from_i64(1);
    for k in 0..=max_n {
        if k > 0 {
            fact = fact.mul_ref(&BigRational::from_i64(k as i64));
        }
        out.push(series.coeff(k).mul_ref(&fact));
    }
    Ok(out)
}

/// Closed form of the elementary melon's first-return matrix:
/// `(y²/(D+1)) / (1 - D²y²/(D+1)²) · [[1, Dy/(D+1)], [Dy/(D+1), 1]]`.
pub fn elementary_closed_form<F: Field>(dim: usize, order: usize) -> Result<ProbMatrix2<TruncatedSeries<F>>> {
    let d = dim as i64;
    let y = TruncatedSeries::<F>::var(order);
    let d1 = F::from_i64(d + 1);
    let prefactor = y.mul(&y).scale(&F::one().div_ref(&d1));
    let q = F::from_i64(d * d).div_ref(&d1.mul_ref(&d1));
    let denom = TruncatedSeries::one(order).sub(&y.mul(&y).scale(&q));
    let diag = prefactor.div(&denom)?;
    let off = diag.mul(&y).scale(&F::from_i64(d).div_ref(&d1));
    Ok(ProbMatrix2 { oo: diag.clone(), ob: off.clone(), bo: off, bb: diag })
}
