//! Engel and Cartan groups in exponential coordinates.
//!
//! Both groups are identified with `R^n` (n = 4, 5) through the exponential
//! map, which is the identity in these coordinates. The group laws are
//!
//! ```text
//! Engel:  (x+y)_1,2 ; x3+y3−x1y2 ; x4+y4+½x1²y2−x1y3
//! Cartan: Engel law in the first four slots ; x5+y5+½x1y2²−x2y3+x1x2y2
//! ```
//!
//! and `X_1..X_n` are the left-invariant vector fields generated by the
//! coordinate directions at the identity.

use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{Coeff, Poly, PolyDiffOp};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupId {
    Engel,
    Cartan,
}

impl GroupId {
    pub fn dimension(self) -> usize {
        match self {
            GroupId::Engel => 4,
            GroupId::Cartan => 5,
        }
    }

    pub fn dilation_weights(self) -> DilationWeights {
        match self {
            GroupId::Engel => DilationWeights(vec![1, 1, 2, 3]),
            GroupId::Cartan => DilationWeights(vec![1, 1, 2, 3, 3]),
        }
    }

    /// Sum of the dilation weights: 7 for Engel, 10 for Cartan.
    pub fn homogeneous_dimension(self) -> u32 {
        self.dilation_weights().homogeneous_dimension()
    }

    /// Non-trivial brackets `[I_i, I_j] = I_k` of the abstract Lie algebra,
    /// 1-based; every other bracket of basis elements vanishes.
    pub fn structure_constants(self) -> &'static [(usize, usize, usize)] {
        match self {
            GroupId::Engel => &[(1, 2, 3), (1, 3, 4)],
            GroupId::Cartan => &[(1, 2, 3), (1, 3, 4), (2, 3, 5)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupId::Engel => "engel",
            GroupId::Cartan => "cartan",
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GroupId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "engel" => Ok(GroupId::Engel),
            "cartan" => Ok(GroupId::Cartan),
            other => Err(Error::InvalidArgument(format!("unknown group '{other}'"))),
        }
    }
}

/// Homogeneous weights of the coordinates under the group dilations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilationWeights(pub Vec<u32>);

impl DilationWeights {
    pub fn homogeneous_dimension(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// A point of the group in exponential coordinates. `T` is either an exact
/// rational (algebraic checks) or `f64` (numerics).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<T> {
    group: GroupId,
    coords: Vec<T>,
}

pub type ExactElement = GroupElement<BigRational>;

impl<T: Coeff + PartialOrd> GroupElement<T> {
    pub fn new(group: GroupId, coords: Vec<T>) -> Result<Self> {
        if coords.len() != group.dimension() {
            return Err(Error::WrongDimension { group, expected: group.dimension(), got: coords.len() });
        }
        Ok(Self { group, coords })
    }

    pub fn identity(group: GroupId) -> Self {
        Self { group, coords: vec![T::zero(); group.dimension()] }
    }

    /// `t·e_i = exp(t X_i)`, 1-based `i`.
    pub fn along_axis(group: GroupId, i: usize, t: T) -> Result<Self> {
        check_index(group, i)?;
        let mut e = Self::identity(group);
        e.coords[i - 1] = t;
        Ok(e)
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch { left: self.group, right: other.group });
        }
        let x = &self.coords;
        let y = &other.coords;
        let h = half::<T>();
        let mut z = vec![
            x[0].clone() + y[0].clone(),
            x[1].clone() + y[1].clone(),
            x[2].clone() + y[2].clone() - x[0].clone() * y[1].clone(),
            x[3].clone() + y[3].clone() + h.clone() * x[0].clone() * x[0].clone() * y[1].clone()
                - x[0].clone() * y[2].clone(),
        ];
        if self.group == GroupId::Cartan {
            z.push(
                x[4].clone() + y[4].clone() + h * x[0].clone() * y[1].clone() * y[1].clone()
                    - x[1].clone() * y[2].clone()
                    + x[0].clone() * x[1].clone() * y[1].clone(),
            );
        }
        Ok(Self { group: self.group, coords: z })
    }

    /// Solves `g·h = 0` coordinate by coordinate; each slot of the law is
    /// linear in `y_k` with unit coefficient once lower slots are known.
    pub fn inverse(&self) -> Self {
        let x = &self.coords;
        let h = half::<T>();
        let y1 = -x[0].clone();
        let y2 = -x[1].clone();
        let y3 = -x[2].clone() + x[0].clone() * y2.clone();
        let y4 = -x[3].clone() - h.clone() * x[0].clone() * x[0].clone() * y2.clone() + x[0].clone() * y3.clone();
        let mut coords = vec![y1, y2.clone(), y3.clone(), y4];
        if self.group == GroupId::Cartan {
            let y5 = -x[4].clone() - h * x[0].clone() * y2.clone() * y2.clone() + x[1].clone() * y3
                - x[0].clone() * x[1].clone() * y2;
            coords.push(y5);
        }
        Self { group: self.group, coords }
    }

    /// `D_r(x)_i = r^{w_i} x_i`.
    pub fn dilate(&self, r: &T) -> Result<Self> {
        if *r <= T::zero() {
            return Err(Error::NonPositiveDilation(format!("{r:?}")));
        }
        let coords = self
            .coords
            .iter()
            .zip(self.group.dilation_weights().0)
            .map(|(c, w)| (0..w).fold(c.clone(), |acc, _| acc * r.clone()))
            .collect();
        Ok(Self { group: self.group, coords })
    }
}

impl GroupElement<BigRational> {
    pub fn to_f64(&self) -> GroupElement<f64> {
        GroupElement { group: self.group, coords: self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect() }
    }
}

impl<T: fmt::Display> fmt::Display for GroupElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn half<T: Coeff>() -> T {
    T::one() / (T::one() + T::one())
}

fn check_index(group: GroupId, i: usize) -> Result<()> {
    if i == 0 || i > group.dimension() {
        return Err(Error::IndexOutOfRange { index: i, max: group.dimension() });
    }
    Ok(())
}

/// Left-invariant vector field `X_i` (1-based) as a first-order operator.
pub fn vector_field<T: Coeff>(group: GroupId, i: usize) -> Result<PolyDiffOp<T>> {
    check_index(group, i)?;
    let n = group.dimension();
    let x = |k: usize| Poly::<T>::var(n, k - 1);
    let d = |k: usize, c: Poly<T>| {
        let mut alpha = vec![0; n];
        alpha[k - 1] = 1;
        PolyDiffOp::term(alpha, c)
    };
    let one = Poly::one(n);
    let op = match (group, i) {
        (_, 1) => d(1, one),
        (GroupId::Engel, 2) => {
            let mut op = &d(2, one) + &d(3, -&x(1));
            op = &op + &d(4, x(1).pow(2).scale(&half()));
            op
        }
        (GroupId::Cartan, 2) => {
            let mut op = &d(2, one) + &d(3, -&x(1));
            op = &op + &d(4, x(1).pow(2).scale(&half()));
            &op + &d(5, &x(1) * &x(2))
        }
        (GroupId::Engel, 3) => &d(3, one) + &d(4, -&x(1)),
        (GroupId::Cartan, 3) => &(&d(3, one) + &d(4, -&x(1))) + &d(5, -&x(2)),
        (_, k) => d(k, one),
    };
    Ok(op)
}

/// All vector fields `X_1..X_n` of the group.
pub fn vector_fields<T: Coeff>(group: GroupId) -> Vec<PolyDiffOp<T>> {
    (1..=group.dimension()).map(|i| vector_field(group, i).expect("index in range")).collect()
}

/// Realisation `I_k ↦ −X_k` of the abstract Lie algebra.
///
/// Under `[A,B] = AB − BA` the fields satisfy `[X_1,X_2] = −X_3` and so on,
/// so the negated fields carry exactly the structure constants returned by
/// [`GroupId::structure_constants`].
pub fn lie_basis<T: Coeff>(group: GroupId, k: usize) -> Result<PolyDiffOp<T>> {
    Ok(-&vector_field::<T>(group, k)?)
}

/// Exact check of every bracket `[I_i, I_j]`, `i < j`, against the structure
/// constants. Returns the pairs that fail (empty when all hold).
pub fn verify_structure_constants(group: GroupId) -> Vec<(usize, usize)> {
    let n = group.dimension();
    let basis: Vec<PolyDiffOp<BigRational>> = (1..=n).map(|k| lie_basis(group, k).expect("index in range")).collect();
    let mut failures = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let bracket = basis[i - 1].commutator(&basis[j - 1]);
            let expected = group
                .structure_constants()
                .iter()
                .find(|&&(a, b, _)| a == i && b == j)
                .map(|&(_, _, k)| basis[k - 1].clone())
                .unwrap_or_else(|| PolyDiffOp::zero(n));
            if bracket != expected {
                failures.push((i, j));
            }
        }
    }
    failures
}

/// Bracket table of the vector fields: `(i, j, sign, k)` meaning
/// `[X_i, X_j] = sign·X_k`, or `k = 0` when the bracket vanishes.
pub fn vector_field_bracket_table(group: GroupId) -> Vec<(usize, usize, i32, usize)> {
    let n = group.dimension();
    let fields = vector_fields::<BigRational>(group);
    let mut table = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let c = fields[i - 1].commutator(&fields[j - 1]);
            if c.is_zero() {
                table.push((i, j, 0, 0));
                continue;
            }
            let hit = (1..=n).find_map(|k| {
                if c == fields[k - 1] {
                    Some((1, k))
                } else if c == -&fields[k - 1] {
                    Some((-1, k))
                } else {
                    None
                }
            });
            // every bracket of the two groups is ± a basis field
            let (sign, k) = hit.expect("bracket is a signed basis field");
            table.push((i, j, sign, k));
        }
    }
    table
}
