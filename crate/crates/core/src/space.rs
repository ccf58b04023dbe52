//! Symbolic π-finite spaces and their cardinalities.
//!
//! A [`SpaceExpr`] is built from finite sets, classifying spaces of finite
//! groups and Eilenberg–MacLane spaces of finite abelian groups, closed under
//! disjoint union and product. Every such space has a rational homotopy
//! cardinality `|X|_0` and, for each prime `p` and height `n`, a height
//! cardinality `|X|_n = |Map(BZ_p^n, X)|_0`, computed through the p-adic free
//! loop space: `|X|_n = |L_p X|_{n-1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{alternating_sign, binom_ext_i64, vp, ExactRational, Prime};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupFingerprint};

/// A finite abelian group given as a product of cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::invalid("C0 is not a finite group"));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n > 0);
        AbelianGroup { factors: vec![n] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().map(|&n| BigUint::from(n)).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|&n| n == 1)
    }

    /// Prime-power cyclic factors, ascending; the isomorphism type.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .factors
            .iter()
            .flat_map(|&n| crate::arith::factorize(n).into_iter().map(|(q, e)| q.pow(e)))
            .collect();
        out.sort_unstable();
        out
    }

    /// The p-primary part `A_p`.
    pub fn p_primary(&self, p: Prime) -> AbelianGroup {
        AbelianGroup {
            factors: self.elementary_divisors().into_iter().filter(|&d| d % p.get() == 0).collect(),
        }
    }

    /// Order of `A / A_p`.
    pub fn prime_to_p_order(&self, p: Prime) -> BigUint {
        self.elementary_divisors()
            .into_iter()
            .filter(|&d| d % p.get() != 0)
            .map(BigUint::from)
            .product()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("C1");
        }
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "C{n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceExpr {
    Empty,
    /// A discrete space with `k >= 1` points.
    FinSet(u64),
    Classifying(Arc<FiniteGroup>),
    /// `B^k A` with `k >= 1`.
    EilenbergMacLane(AbelianGroup, u32),
    Disjoint(Vec<SpaceExpr>),
    Product(Vec<SpaceExpr>),
}

/// How height cardinalities are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeightStrategy {
    /// Closed forms on atoms: commuting-tuple counts for `BG`, the
    /// binomial formula for Eilenberg–MacLane spaces.
    #[default]
    Direct,
    /// Apply the p-adic loop operator `n` times and take the homotopy
    /// cardinality of the result.
    LoopRecursion,
}

/// Connectivity of a space; contractible spaces are infinitely connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Connectivity {
    Finite(i64),
    Infinite,
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectivity::Finite(c) => write!(f, "{c}"),
            Connectivity::Infinite => f.write_str("inf"),
        }
    }
}

impl SpaceExpr {
    pub fn point() -> Self {
        SpaceExpr::FinSet(1)
    }

    /// `k` points; zero points is the empty space.
    pub fn fin_set(k: u64) -> Self {
        if k == 0 {
            SpaceExpr::Empty
        } else {
            SpaceExpr::FinSet(k)
        }
    }

    pub fn classifying(g: FiniteGroup) -> Self {
        SpaceExpr::Classifying(Arc::new(g))
    }

    /// `B^k A`; degree zero is the discrete set `A`.
    pub fn eilenberg_maclane(a: AbelianGroup, k: u32) -> Result<Self> {
        if k == 0 {
            let n = a
                .order()
                .to_u64()
                .ok_or_else(|| Error::BudgetExceeded("abelian group order overflows u64".into()))?;
            return Ok(SpaceExpr::fin_set(n));
        }
        Ok(SpaceExpr::EilenbergMacLane(a, k))
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SpaceExpr::Empty => true,
            SpaceExpr::Disjoint(parts) => parts.iter().all(SpaceExpr::is_empty),
            SpaceExpr::Product(parts) => parts.iter().any(SpaceExpr::is_empty),
            _ => false,
        }
    }

    /// `|X|_0`: sum over components of the alternating product of homotopy
    /// group orders.
    pub fn homotopy_cardinality(&self) -> ExactRational {
        match self {
            SpaceExpr::Empty => ExactRational::zero(),
            SpaceExpr::FinSet(k) => ExactRational::from(*k),
            SpaceExpr::Classifying(g) => ExactRational::new(1, g.order() as u64).expect("nonzero order"),
            SpaceExpr::EilenbergMacLane(a, k) => {
                ExactRational::from(a.order()).pow(alternating_sign(*k as i64)).expect("nonzero order")
            }
            SpaceExpr::Disjoint(parts) => parts.iter().map(SpaceExpr::homotopy_cardinality).sum(),
            SpaceExpr::Product(parts) => parts.iter().map(SpaceExpr::homotopy_cardinality).product(),
        }
    }

    /// The p-adic free loop space `Map(BZ_p, X)`.
    pub fn p_adic_loop(&self, p: Prime) -> SpaceExpr {
        match self {
            SpaceExpr::Empty | SpaceExpr::FinSet(_) => self.clone(),
            SpaceExpr::Classifying(g) => {
                let mut parts: Vec<SpaceExpr> = g
                    .p_loop_decomposition(p)
                    .into_iter()
                    .map(|c| {
                        if c.centralizer.order() == g.order() {
                            SpaceExpr::Classifying(g.clone())
                        } else {
                            SpaceExpr::classifying(c.centralizer)
                        }
                    })
                    .collect();
                if parts.len() == 1 {
                    parts.pop().expect("one part")
                } else {
                    SpaceExpr::Disjoint(parts)
                }
            }
            SpaceExpr::EilenbergMacLane(a, k) => {
                let ap = a.p_primary(p);
                if ap.is_trivial() {
                    return self.clone();
                }
                let fiber = if *k == 1 {
                    SpaceExpr::FinSet(ap.order().to_u64().expect("p-part of a u64-order group"))
                } else {
                    SpaceExpr::EilenbergMacLane(ap, k - 1)
                };
                SpaceExpr::Product(vec![self.clone(), fiber])
            }
            SpaceExpr::Disjoint(parts) => SpaceExpr::Disjoint(parts.iter().map(|x| x.p_adic_loop(p)).collect()),
            SpaceExpr::Product(parts) => SpaceExpr::Product(parts.iter().map(|x| x.p_adic_loop(p)).collect()),
        }
    }

    /// `|X|_n` at the prime `p`.
    pub fn height_cardinality(&self, p: Prime, n: u32) -> ExactRational {
        self.height_cardinality_with(p, n, HeightStrategy::Direct)
    }

    pub fn height_cardinality_with(&self, p: Prime, n: u32, strategy: HeightStrategy) -> ExactRational {
        if n == 0 {
            return self.homotopy_cardinality();
        }
        match strategy {
            HeightStrategy::LoopRecursion => self.p_adic_loop(p).height_cardinality_with(p, n - 1, strategy),
            HeightStrategy::Direct => match self {
                SpaceExpr::Empty | SpaceExpr::FinSet(_) => self.homotopy_cardinality(),
                SpaceExpr::Classifying(g) => {
                    let count = g.count_commuting_p_tuples(p, n as usize);
                    ExactRational::new(count, g.order() as u64).expect("nonzero order")
                }
                SpaceExpr::EilenbergMacLane(a, k) => em_height_cardinality(a, *k, p, n),
                SpaceExpr::Disjoint(parts) => parts.iter().map(|x| x.height_cardinality_with(p, n, strategy)).sum(),
                SpaceExpr::Product(parts) => {
                    parts.iter().map(|x| x.height_cardinality_with(p, n, strategy)).product()
                }
            },
        }
    }

    /// Connectivity; the empty space is assigned `-1`.
    pub fn connectivity(&self) -> Connectivity {
        use Connectivity::*;
        match self {
            SpaceExpr::Empty => Finite(-1),
            SpaceExpr::FinSet(1) => Infinite,
            SpaceExpr::FinSet(_) => Finite(-1),
            SpaceExpr::Classifying(g) if g.order() == 1 => Infinite,
            SpaceExpr::Classifying(_) => Finite(0),
            SpaceExpr::EilenbergMacLane(a, _) if a.is_trivial() => Infinite,
            SpaceExpr::EilenbergMacLane(_, k) => Finite(*k as i64 - 1),
            SpaceExpr::Disjoint(parts) => {
                let nonempty: Vec<_> = parts.iter().filter(|x| !x.is_empty()).collect();
                match nonempty.as_slice() {
                    [] => Finite(-1),
                    [only] => only.connectivity(),
                    _ => Finite(-1),
                }
            }
            SpaceExpr::Product(parts) => {
                if self.is_empty() {
                    Finite(-1)
                } else {
                    parts.iter().map(SpaceExpr::connectivity).min().unwrap_or(Infinite)
                }
            }
        }
    }

    /// Largest degree of a nontrivial homotopy group, with `-2` for
    /// contractible spaces and `-1` for the empty space.
    pub fn truncation_level(&self) -> i64 {
        match self {
            SpaceExpr::Empty => -1,
            SpaceExpr::FinSet(1) => -2,
            SpaceExpr::FinSet(_) => 0,
            SpaceExpr::Classifying(g) => {
                if g.order() == 1 {
                    -2
                } else {
                    1
                }
            }
            SpaceExpr::EilenbergMacLane(a, k) => {
                if a.is_trivial() {
                    -2
                } else {
                    *k as i64
                }
            }
            SpaceExpr::Disjoint(parts) => {
                let nonempty: Vec<_> = parts.iter().filter(|x| !x.is_empty()).collect();
                match nonempty.as_slice() {
                    [] => -1,
                    [only] => only.truncation_level(),
                    many => many.iter().map(|x| x.truncation_level()).max().unwrap_or(0).max(0),
                }
            }
            SpaceExpr::Product(parts) => {
                if self.is_empty() {
                    -1
                } else {
                    parts.iter().map(SpaceExpr::truncation_level).max().unwrap_or(-2)
                }
            }
        }
    }

    /// Whether the space is m-finite: π-finite and m-truncated.
    pub fn is_m_finite(&self, m: i64) -> bool {
        m >= -2 && self.truncation_level() <= m
    }

    /// Whether `|X|_n` is a p-adic unit.
    pub fn is_amenable_at_height(&self, p: Prime, n: u32) -> Result<bool> {
        if n == 0 {
            return Err(Error::invalid("amenability is tested at heights n >= 1"));
        }
        if self.is_empty() {
            return Err(Error::invalid("amenability of the empty space is undefined"));
        }
        Ok(vp(&self.height_cardinality(p, n), p) == 0)
    }

    pub fn normal_form(&self) -> NormalForm {
        match self {
            SpaceExpr::Empty => NormalForm::zero(),
            SpaceExpr::FinSet(k) => NormalForm::scalar(BigUint::from(*k)),
            SpaceExpr::Classifying(g) => match g.abelian_invariants() {
                Some(divisors) => NormalForm::atom(Atom::EilenbergMacLane { degree: 1, divisors }),
                None => NormalForm::atom(Atom::Classifying(GroupAtom {
                    fingerprint: g.fingerprint(),
                    group: g.clone(),
                })),
            },
            SpaceExpr::EilenbergMacLane(a, k) => {
                NormalForm::atom(Atom::EilenbergMacLane { degree: *k, divisors: a.elementary_divisors() })
            }
            SpaceExpr::Disjoint(parts) => parts.iter().fold(NormalForm::zero(), |acc, x| acc.add(&x.normal_form())),
            SpaceExpr::Product(parts) => parts.iter().fold(NormalForm::one(), |acc, x| acc.mul(&x.normal_form())),
        }
    }
}

/// `|B^k A|_n = |A_p|^C(n-1,k) * |A/A_p|^((-1)^k)`.
fn em_height_cardinality(a: &AbelianGroup, k: u32, p: Prime, n: u32) -> ExactRational {
    let exp = binom_ext_i64(n as i64 - 1, k as i64).expect("binomial of small arguments");
    let p_part = ExactRational::from(a.p_primary(p).order()).pow(exp).expect("nonzero");
    let rest = ExactRational::from(a.prime_to_p_order(p))
        .pow(alternating_sign(k as i64))
        .expect("nonzero");
    p_part * rest
}

/// A nonabelian classifying-space atom, compared by its fingerprint.
#[derive(Debug, Clone)]
pub struct GroupAtom {
    pub fingerprint: Arc<GroupFingerprint>,
    pub group: Arc<FiniteGroup>,
}

impl PartialEq for GroupAtom {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
    }
}

impl Eq for GroupAtom {}

impl PartialOrd for GroupAtom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupAtom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.fingerprint.cmp(&other.fingerprint)
    }
}

/// A connected indecomposable factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    /// `B^degree` of the abelian group with these elementary divisors;
    /// degree 1 also covers classifying spaces of abelian groups.
    EilenbergMacLane { degree: u32, divisors: Vec<u64> },
    Classifying(GroupAtom),
}

impl Atom {
    pub fn to_expr(&self) -> SpaceExpr {
        match self {
            Atom::EilenbergMacLane { degree, divisors } => {
                SpaceExpr::EilenbergMacLane(AbelianGroup { factors: divisors.clone() }, *degree)
            }
            Atom::Classifying(g) => SpaceExpr::Classifying(g.group.clone()),
        }
    }
}

/// A connected component: a product of atoms, with Eilenberg–MacLane
/// atoms of equal degree merged.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Component(Vec<Atom>);

impl Component {
    fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut em: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
        let mut rest = Vec::new();
        for atom in atoms {
            match atom {
                Atom::EilenbergMacLane { degree, divisors } => em.entry(degree).or_default().extend(divisors),
                other => rest.push(other),
            }
        }
        let mut out: Vec<Atom> = em
            .into_iter()
            .filter(|(_, d)| !d.is_empty())
            .map(|(degree, mut divisors)| {
                divisors.sort_unstable();
                Atom::EilenbergMacLane { degree, divisors }
            })
            .collect();
        out.extend(rest);
        out.sort();
        Component(out)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn to_expr(&self) -> SpaceExpr {
        match self.0.as_slice() {
            [] => SpaceExpr::point(),
            [a] => a.to_expr(),
            many => SpaceExpr::Product(many.iter().map(Atom::to_expr).collect()),
        }
    }
}

/// The class of a space in the semiring of isomorphism classes: a multiset
/// of connected components.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalForm {
    components: BTreeMap<Component, BigUint>,
}

impl NormalForm {
    pub fn zero() -> Self {
        NormalForm::default()
    }

    pub fn one() -> Self {
        NormalForm::scalar(BigUint::one())
    }

    fn scalar(k: BigUint) -> Self {
        let mut components = BTreeMap::new();
        if !k.is_zero() {
            components.insert(Component(Vec::new()), k);
        }
        NormalForm { components }
    }

    fn atom(a: Atom) -> Self {
        let mut components = BTreeMap::new();
        components.insert(Component::from_atoms([a]), BigUint::one());
        NormalForm { components }
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for (c, m) in &other.components {
            *out.components.entry(c.clone()).or_default() += m;
        }
        out
    }

    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        let mut out = NormalForm::zero();
        for (a, m) in &self.components {
            for (b, n) in &other.components {
                let c = Component::from_atoms(a.0.iter().chain(&b.0).cloned());
                *out.components.entry(c).or_default() += m * n;
            }
        }
        out
    }

    /// Distinct component types with their multiplicities.
    pub fn components(&self) -> impl Iterator<Item = (&Component, &BigUint)> {
        self.components.iter()
    }

    pub fn distinct_components(&self) -> usize {
        self.components.len()
    }

    /// Total number of connected components, with multiplicity.
    pub fn component_count(&self) -> BigUint {
        self.components.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn to_expr(&self) -> SpaceExpr {
        let parts: Vec<SpaceExpr> = self
            .components
            .iter()
            .map(|(c, m)| {
                let body = c.to_expr();
                if m.is_one() {
                    body
                } else {
                    let k = m.to_u64().expect("multiplicity fits in u64");
                    if c.0.is_empty() {
                        SpaceExpr::FinSet(k)
                    } else {
                        SpaceExpr::Product(vec![SpaceExpr::FinSet(k), body])
                    }
                }
            })
            .collect();
        match parts.len() {
            0 => SpaceExpr::Empty,
            1 => parts.into_iter().next().expect("one part"),
            _ => SpaceExpr::Disjoint(parts),
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Empty => f.write_str("0"),
            SpaceExpr::FinSet(1) => f.write_str("pt"),
            SpaceExpr::FinSet(k) => write!(f, "{k}"),
            SpaceExpr::Classifying(g) => match (g.label(), g.abelian_invariants()) {
                (Some(label), _) => write!(f, "B({label})"),
                (None, Some(inv)) => write!(f, "B({})", AbelianGroup { factors: inv }),
                // no descriptor is known for this group; not reparseable
                (None, None) => write!(f, "B(<group of order {}>)", g.order()),
            },
            SpaceExpr::EilenbergMacLane(a, k) => write!(f, "B^{k}({a})"),
            SpaceExpr::Disjoint(parts) => {
                if parts.is_empty() {
                    return f.write_str("0");
                }
                for (i, x) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            SpaceExpr::Product(parts) => {
                if parts.is_empty() {
                    return f.write_str("pt");
                }
                for (i, x) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    match x {
                        SpaceExpr::Disjoint(inner) if inner.len() > 1 => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupDescriptor::*};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn bg(d: crate::group::GroupDescriptor) -> SpaceExpr {
        SpaceExpr::classifying(build_group(&d).unwrap())
    }

    fn em(n: u64, k: u32) -> SpaceExpr {
        SpaceExpr::EilenbergMacLane(AbelianGroup::cyclic(n), k)
    }

    #[test]
    fn homotopy_cardinality_examples() {
        assert_eq!(bg(Symmetric(3)).homotopy_cardinality(), q("1/6"));
        assert_eq!(em(3, 2).homotopy_cardinality(), q("3"));
        assert_eq!(em(3, 1).homotopy_cardinality(), q("1/3"));
        let x = SpaceExpr::Disjoint(vec![SpaceExpr::FinSet(2), bg(Cyclic(2))]);
        assert_eq!(x.homotopy_cardinality(), q("5/2"));
        assert_eq!(SpaceExpr::Empty.homotopy_cardinality(), q("0"));
    }

    #[test]
    fn loop_examples() {
        let l = bg(Symmetric(3)).p_adic_loop(p(2));
        let SpaceExpr::Disjoint(parts) = &l else { panic!("expected a disjoint union, got {l}") };
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], bg(Symmetric(3)));
        assert_eq!(parts[1].normal_form(), bg(Cyclic(2)).normal_form());

        for prime in [2u64, 3, 5] {
            for k in 2..5 {
                let expected = SpaceExpr::Product(vec![em(prime, k), em(prime, k - 1)]);
                assert_eq!(em(prime, k).p_adic_loop(p(prime)), expected);
            }
            assert_eq!(
                em(prime, 1).p_adic_loop(p(prime)),
                SpaceExpr::Product(vec![em(prime, 1), SpaceExpr::FinSet(prime)])
            );
        }
        assert_eq!(SpaceExpr::FinSet(3).p_adic_loop(p(2)), SpaceExpr::FinSet(3));
        // prime-to-p groups only contribute constant loops
        assert_eq!(em(9, 2).p_adic_loop(p(2)), em(9, 2));
    }

    #[test]
    fn height_examples() {
        for prime in [2u64, 3, 5] {
            for k in 0..5u32 {
                for n in 0..6u32 {
                    let exp = crate::arith::binom_ext_i64(n as i64 - 1, k as i64).unwrap();
                    let expected = ExactRational::int_pow(prime, exp).unwrap();
                    let x = if k == 0 { SpaceExpr::FinSet(prime) } else { em(prime, k) };
                    assert_eq!(x.height_cardinality(p(prime), n), expected, "p={prime} k={k} n={n}");
                }
            }
        }
        let s3 = bg(Symmetric(3));
        assert_eq!(s3.height_cardinality(p(2), 1), q("2/3"));
        assert_eq!(s3.height_cardinality(p(2), 2), q("5/3"));
        for n in 1..6 {
            assert_eq!(bg(Cyclic(2)).height_cardinality(p(2), n), ExactRational::int_pow(2, n as i64 - 1).unwrap());
        }
    }

    #[test]
    fn strategies_agree_on_groups() {
        for d in [Symmetric(3), Dihedral(8), Symmetric(4), Cyclic(6)] {
            let x = bg(d);
            for prime in [2, 3] {
                for n in 0..4 {
                    assert_eq!(
                        x.height_cardinality_with(p(prime), n, HeightStrategy::Direct),
                        x.height_cardinality_with(p(prime), n, HeightStrategy::LoopRecursion)
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_abelian_groups() {
        // C12 = C4 x C3 at p = 2: |B^2 C12|_n = 4^C(n-1,2) * 3
        let x = SpaceExpr::EilenbergMacLane(AbelianGroup::new(vec![12]).unwrap(), 2);
        for n in 0..6 {
            assert_eq!(
                x.height_cardinality_with(p(2), n, HeightStrategy::Direct),
                x.height_cardinality_with(p(2), n, HeightStrategy::LoopRecursion)
            );
        }
        assert_eq!(x.height_cardinality(p(2), 4), q("192"));
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(em(3, 2).connectivity(), Connectivity::Finite(1));
        assert_eq!(SpaceExpr::Disjoint(vec![SpaceExpr::point(), SpaceExpr::point()]).connectivity(), Connectivity::Finite(-1));
        assert_eq!(SpaceExpr::point().connectivity(), Connectivity::Infinite);
        assert_eq!(SpaceExpr::Empty.connectivity(), Connectivity::Finite(-1));
        assert_eq!(bg(Symmetric(3)).connectivity(), Connectivity::Finite(0));
        assert_eq!(SpaceExpr::Product(vec![em(2, 3), em(2, 2)]).connectivity(), Connectivity::Finite(1));
    }

    #[test]
    fn finiteness_examples() {
        assert!(bg(Symmetric(3)).is_m_finite(1));
        assert!(!bg(Symmetric(3)).is_m_finite(0));
        assert!(em(3, 4).is_m_finite(4));
        assert!(!em(3, 4).is_m_finite(3));
        assert!(SpaceExpr::point().is_m_finite(-2));
        assert!(SpaceExpr::Empty.is_m_finite(-1));
        assert!(!SpaceExpr::Empty.is_m_finite(-2));
        assert!(SpaceExpr::FinSet(3).is_m_finite(0));
    }

    #[test]
    fn amenability_examples() {
        for prime in [2u64, 3, 5] {
            assert!(em(prime, 2).is_amenable_at_height(p(prime), 2).unwrap());
        }
        assert!(!bg(Symmetric(3)).is_amenable_at_height(p(2), 1).unwrap());
        assert!(bg(Cyclic(2)).is_amenable_at_height(p(2), 1).unwrap());
        assert!(SpaceExpr::Empty.is_amenable_at_height(p(2), 1).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let x = SpaceExpr::Product(vec![
            SpaceExpr::Disjoint(vec![SpaceExpr::FinSet(2), bg(Cyclic(2))]),
            SpaceExpr::point(),
        ]);
        let nf = x.normal_form();
        assert_eq!(nf.distinct_components(), 2);
        assert_eq!(nf.component_count(), BigUint::from(3u32));

        assert_eq!(em(2, 1).normal_form(), bg(Cyclic(2)).normal_form());
        assert_eq!(
            SpaceExpr::Product(vec![em(2, 1), em(3, 1)]).normal_form(),
            bg(Cyclic(6)).normal_form()
        );
        let empty_product = SpaceExpr::Product(vec![SpaceExpr::Empty, bg(Symmetric(3))]);
        assert!(empty_product.normal_form().is_zero());
        assert_eq!(bg(Dihedral(8)).normal_form(), bg(crate::group::GroupDescriptor::wreath(Cyclic(2), 2)).normal_form());
    }

    #[test]
    fn normal_form_is_idempotent() {
        let x = SpaceExpr::Product(vec![
            SpaceExpr::Disjoint(vec![SpaceExpr::FinSet(2), bg(Symmetric(3)), em(4, 2)]),
            SpaceExpr::Disjoint(vec![bg(Cyclic(2)), SpaceExpr::point()]),
        ]);
        let nf = x.normal_form();
        assert_eq!(nf.to_expr().normal_form(), nf);
        for n in 0..3 {
            assert_eq!(nf.to_expr().height_cardinality(p(2), n), x.height_cardinality(p(2), n));
        }
    }

    #[test]
    fn display_forms() {
        let x = SpaceExpr::Product(vec![
            SpaceExpr::Disjoint(vec![SpaceExpr::FinSet(2), bg(Symmetric(3))]),
            em(3, 2),
        ]);
        assert_eq!(x.to_string(), "(2 + B(S3)) * B^2(C3)");
        assert_eq!(SpaceExpr::Empty.to_string(), "0");
    }
}
