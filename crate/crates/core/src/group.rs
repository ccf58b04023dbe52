//! Finite groups stored as validated Cayley tables.
//!
//! Elements are indices `0..order`. Construction computes inverses, element
//! orders, conjugacy classes and the centralizer of every class
//! representative, so all later queries are read-only.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{factorize, Prime};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// Environment variable overriding [`DEFAULT_ORDER_CAP`].
pub const ORDER_CAP_ENV: &str = "PIFINITE_ORDER_CAP";

/// The order cap from `PIFINITE_ORDER_CAP`, or the default when unset.
pub fn order_cap_from_env() -> Result<usize> {
    match std::env::var(ORDER_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| Error::invalid(format!("{ORDER_CAP_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_ORDER_CAP),
    }
}

/// A constructor term for one of the supported group families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Cyclic(u64),
    /// Symmetric group on at most six letters.
    Symmetric(u64),
    /// Dihedral group, parametrized by its order.
    Dihedral(u64),
    DirectProduct(Box<GroupDescriptor>, Box<GroupDescriptor>),
    /// `d wr C_n`: `d^n` with `C_n` cyclically permuting the factors.
    Wreath(Box<GroupDescriptor>, u64),
}

impl GroupDescriptor {
    pub fn direct_product(a: GroupDescriptor, b: GroupDescriptor) -> Self {
        GroupDescriptor::DirectProduct(Box::new(a), Box::new(b))
    }

    pub fn wreath(d: GroupDescriptor, n: u64) -> Self {
        GroupDescriptor::Wreath(Box::new(d), n)
    }

    /// The order the descriptor denotes, `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        match self {
            GroupDescriptor::Cyclic(n) | GroupDescriptor::Dihedral(n) => Some(*n as u128),
            GroupDescriptor::Symmetric(n) => (1..=*n as u128).try_fold(1u128, |a, b| a.checked_mul(b)),
            GroupDescriptor::DirectProduct(a, b) => a.order()?.checked_mul(b.order()?),
            GroupDescriptor::Wreath(d, n) => {
                let base = d.order()?;
                let exp = u32::try_from(*n).ok()?;
                base.checked_pow(exp)?.checked_mul(*n as u128)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::Cyclic(0) => Err(Error::invalid("C0 is not a group")),
            GroupDescriptor::Symmetric(n) if *n == 0 || *n > 6 => {
                Err(Error::invalid(format!("S{n}: symmetric groups are supported for 1..=6 letters")))
            }
            GroupDescriptor::Dihedral(n) if *n < 2 || n % 2 != 0 => {
                Err(Error::invalid(format!("D{n}: dihedral order must be even and at least 2")))
            }
            GroupDescriptor::Wreath(_, 0) => Err(Error::invalid("wreath with C0")),
            GroupDescriptor::DirectProduct(a, b) => {
                a.validate()?;
                b.validate()
            }
            GroupDescriptor::Wreath(d, _) => d.validate(),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic(n) => write!(f, "C{n}"),
            GroupDescriptor::Symmetric(n) => write!(f, "S{n}"),
            GroupDescriptor::Dihedral(n) => write!(f, "D{n}"),
            GroupDescriptor::DirectProduct(a, b) => {
                write!(f, "{a} x ")?;
                if matches!(**b, GroupDescriptor::DirectProduct(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            GroupDescriptor::Wreath(d, n) => {
                if matches!(**d, GroupDescriptor::DirectProduct(..)) {
                    write!(f, "({d}) wr C{n}")
                } else {
                    write!(f, "{d} wr C{n}")
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    pub representative: u32,
    pub members: Vec<u32>,
    /// Elements of the centralizer of the representative.
    pub centralizer: Vec<u32>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// An isomorphism invariant strong enough to determine every height
/// cardinality of `BG`: the order, the elementary divisors of the center,
/// and recursively the centralizers of the non-central classes.
///
/// For abelian groups it is exactly the isomorphism type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupFingerprint {
    pub order: u64,
    pub center: Vec<u64>,
    pub noncentral: Vec<(u64, u64, Arc<GroupFingerprint>)>,
}

/// One component of the p-adic free loop space of `BG`.
#[derive(Debug, Clone)]
pub struct LoopComponent {
    pub representative: u32,
    pub class_size: usize,
    pub centralizer: FiniteGroup,
}

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: u32,
    table: Vec<u32>,
    inverses: Vec<u32>,
    element_orders: Vec<u64>,
    classes: Vec<ConjugacyClass>,
    class_index: Vec<usize>,
    label: Option<GroupDescriptor>,
    fingerprint: OnceLock<Arc<GroupFingerprint>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("label", &self.label)
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

/// Build the group a descriptor denotes, with the default order cap.
pub fn build_group(d: &GroupDescriptor) -> Result<FiniteGroup> {
    build_group_with_cap(d, DEFAULT_ORDER_CAP)
}

pub fn build_group_with_cap(d: &GroupDescriptor, cap: usize) -> Result<FiniteGroup> {
    d.validate()?;
    check_cap(d.order(), cap)?;
    let mut g = match d {
        GroupDescriptor::Cyclic(n) => FiniteGroup::cyclic(*n as usize),
        GroupDescriptor::Symmetric(n) => symmetric(*n as usize),
        GroupDescriptor::Dihedral(n) => dihedral(*n as usize),
        GroupDescriptor::DirectProduct(a, b) => {
            let a = build_group_with_cap(a, cap)?;
            let b = build_group_with_cap(b, cap)?;
            a.direct_product(&b, cap)?
        }
        GroupDescriptor::Wreath(base, n) => {
            let base = build_group_with_cap(base, cap)?;
            base.wreath_cyclic(*n as usize, cap)?
        }
    };
    g.label = Some(d.clone());
    Ok(g)
}

fn check_cap(order: Option<u128>, cap: usize) -> Result<()> {
    match order {
        Some(o) if o <= cap as u128 => Ok(()),
        Some(o) => Err(Error::OrderCapExceeded { order: o, cap }),
        None => Err(Error::OrderCapExceeded { order: u128::MAX, cap }),
    }
}

fn symmetric(n: usize) -> FiniteGroup {
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut current: Vec<u8> = (0..n as u8).collect();
    loop {
        perms.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    let index: HashMap<&[u8], u32> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i as u32)).collect();
    let order = perms.len();
    let mut table = vec![0u32; order * order];
    let mut buf = vec![0u8; n];
    for (i, s) in perms.iter().enumerate() {
        for (j, t) in perms.iter().enumerate() {
            // (s t)(x) = s(t(x))
            for x in 0..n {
                buf[x] = s[t[x] as usize];
            }
            table[i * order + j] = index[buf.as_slice()];
        }
    }
    FiniteGroup::from_table(order, table, 0).expect("symmetric group table is a group")
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn dihedral(order: usize) -> FiniteGroup {
    // r^a s^b has index a + k*b
    let k = order / 2;
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (a, b) = (x % k, x / k);
        for y in 0..order {
            let (c, d) = (y % k, y / k);
            let rot = if b == 0 { (a + c) % k } else { (a + k - c) % k };
            table[x * order + y] = (rot + k * ((b + d) % 2)) as u32;
        }
    }
    FiniteGroup::from_table(order, table, 0).expect("dihedral group table is a group")
}

impl FiniteGroup {
    /// Validate a multiplication table (row-major, `table[a * order + b] = a b`)
    /// and build the group with all caches.
    pub fn from_table(order: usize, table: Vec<u32>, identity: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("a group must have at least one element"));
        }
        if table.len() != order * order {
            return Err(Error::invalid(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if identity as usize >= order || table.iter().any(|&x| x as usize >= order) {
            return Err(Error::invalid("table entry out of range"));
        }
        let mul = |a: u32, b: u32| table[a as usize * order + b as usize];
        for x in 0..order as u32 {
            if mul(identity, x) != x || mul(x, identity) != x {
                return Err(Error::invalid(format!("element {identity} is not an identity")));
            }
        }
        for x in 0..order as u32 {
            let has_inverse = (0..order as u32).any(|y| mul(x, y) == identity && mul(y, x) == identity);
            if !has_inverse {
                return Err(Error::invalid(format!("element {x} has no inverse")));
            }
        }
        if !is_associative(order, &table, identity) {
            return Err(Error::invalid("table is not associative"));
        }
        Ok(Self::from_trusted(order, table, identity))
    }

    fn from_trusted(order: usize, table: Vec<u32>, identity: u32) -> Self {
        let mul = |a: u32, b: u32| table[a as usize * order + b as usize];
        let mut inverses = vec![0u32; order];
        for x in 0..order as u32 {
            inverses[x as usize] = (0..order as u32).find(|&y| mul(x, y) == identity).expect("validated group");
        }
        let element_orders = (0..order as u32)
            .map(|x| {
                let mut k = 1u64;
                let mut acc = x;
                while acc != identity {
                    acc = mul(acc, x);
                    k += 1;
                }
                k
            })
            .collect();

        let mut class_index = vec![usize::MAX; order];
        let mut classes = Vec::new();
        // identity first, then by increasing index of the representative
        let reps = std::iter::once(identity).chain((0..order as u32).filter(|&x| x != identity));
        for g in reps {
            if class_index[g as usize] != usize::MAX {
                continue;
            }
            let mut members = Vec::new();
            for h in 0..order as u32 {
                let c = mul(mul(h, g), inverses[h as usize]);
                if class_index[c as usize] == usize::MAX {
                    class_index[c as usize] = classes.len();
                    members.push(c);
                }
            }
            members.sort_unstable();
            let centralizer = (0..order as u32).filter(|&h| mul(h, g) == mul(g, h)).collect();
            classes.push(ConjugacyClass { representative: g, members, centralizer });
        }

        FiniteGroup {
            order,
            identity,
            table,
            inverses,
            element_orders,
            classes,
            class_index,
            label: None,
            fingerprint: OnceLock::new(),
        }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "C0 is not a group");
        let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        let mut g = Self::from_trusted(n, table, 0);
        g.label = Some(GroupDescriptor::Cyclic(n as u64));
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn label(&self) -> Option<&GroupDescriptor> {
        self.label.as_ref()
    }

    pub fn with_label(mut self, label: GroupDescriptor) -> Self {
        self.label = Some(label);
        self
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn element_order(&self, a: u32) -> u64 {
        self.element_orders[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    /// Elements of p-power order, the identity included.
    pub fn p_elements(&self, p: Prime) -> Vec<u32> {
        self.elements().filter(|&g| is_power_of(self.element_order(g), p.get())).collect()
    }

    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: u32) -> &ConjugacyClass {
        &self.classes[self.class_index[g as usize]]
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer_elements(&self, set: &[u32]) -> Vec<u32> {
        if let [g] = set {
            return self.class_of(*g).centralizer_of(*g, self);
        }
        self.elements().filter(|&h| set.iter().all(|&s| self.commute(h, s))).collect()
    }

    /// The centralizer of `set` as a group with the induced table.
    pub fn centralizer(&self, set: &[u32]) -> Result<FiniteGroup> {
        if let Some(&bad) = set.iter().find(|&&s| s as usize >= self.order) {
            return Err(Error::invalid(format!("element {bad} is not in a group of order {}", self.order)));
        }
        Ok(self.subgroup(&self.centralizer_elements(set)))
    }

    /// Induced group on a subset known to be a subgroup.
    fn subgroup(&self, elements: &[u32]) -> FiniteGroup {
        if elements.len() == self.order {
            return self.clone();
        }
        let mut position = vec![u32::MAX; self.order];
        for (i, &e) in elements.iter().enumerate() {
            position[e as usize] = i as u32;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                table[i * n + j] = position[self.mul(a, b) as usize];
            }
        }
        let identity = position[self.identity as usize];
        debug_assert!(identity != u32::MAX && table.iter().all(|&x| x != u32::MAX));
        Self::from_trusted(n, table, identity)
    }

    pub fn center(&self) -> Vec<u32> {
        self.classes.iter().filter(|c| c.size() == 1).map(|c| c.representative).collect()
    }

    pub fn direct_product(&self, other: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        check_cap((self.order as u128).checked_mul(other.order as u128), cap)?;
        let (m, n) = (self.order, other.order);
        let size = m * n;
        let mut table = vec![0u32; size * size];
        for x in 0..size {
            let (a, b) = (x / n, x % n);
            for y in 0..size {
                let (c, d) = (y / n, y % n);
                let ac = self.mul(a as u32, c as u32) as usize;
                let bd = other.mul(b as u32, d as u32) as usize;
                table[x * size + y] = (ac * n + bd) as u32;
            }
        }
        let identity = (self.identity as usize * n + other.identity as usize) as u32;
        let mut g = FiniteGroup::from_table(size, table, identity)?;
        if let (Some(a), Some(b)) = (&self.label, &other.label) {
            g.label = Some(GroupDescriptor::direct_product(a.clone(), b.clone()));
        }
        Ok(g)
    }

    /// `self wr C_n`: pairs `(f, s)` with `f` in `self^n`, `s` in `C_n`, and
    /// `(f, s)(f', t) = (f * (s . f'), s + t)` where `(s . f')_i = f'_{i - s}`.
    pub fn wreath_cyclic(&self, n: usize, cap: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::invalid("wreath with C0"));
        }
        let base_order = (self.order as u128).checked_pow(n as u32);
        check_cap(base_order.and_then(|b| b.checked_mul(n as u128)), cap)?;
        let m = self.order;
        let base = m.pow(n as u32);
        let size = base * n;
        let decode = |x: usize| -> (Vec<usize>, usize) {
            let mut f = Vec::with_capacity(n);
            let mut rest = x % base;
            for _ in 0..n {
                f.push(rest % m);
                rest /= m;
            }
            (f, x / base)
        };
        let encode = |f: &[usize], s: usize| -> usize {
            let mut idx = 0;
            for &c in f.iter().rev() {
                idx = idx * m + c;
            }
            idx + s * base
        };
        let decoded: Vec<_> = (0..size).map(decode).collect();
        let mut table = vec![0u32; size * size];
        let mut prod = vec![0usize; n];
        for (x, (f, s)) in decoded.iter().enumerate() {
            for (y, (g, t)) in decoded.iter().enumerate() {
                for i in 0..n {
                    let shifted = g[(i + n - s) % n];
                    prod[i] = self.mul(f[i] as u32, shifted as u32) as usize;
                }
                table[x * size + y] = encode(&prod, (s + t) % n) as u32;
            }
        }
        let identity = encode(&vec![self.identity as usize; n], 0) as u32;
        let mut g = FiniteGroup::from_table(size, table, identity)?;
        if let Some(l) = &self.label {
            g.label = Some(GroupDescriptor::wreath(l.clone(), n as u64));
        }
        Ok(g)
    }

    /// Number of pairwise commuting `n`-tuples of p-elements, i.e. the number
    /// of continuous homomorphisms `Z_p^n -> G`.
    pub fn count_commuting_p_tuples(&self, p: Prime, n: usize) -> BigUint {
        TupleCounter::new(self, p).count(n)
    }

    /// One entry per conjugacy class of p-elements, identity first.
    pub fn p_loop_decomposition(&self, p: Prime) -> Vec<LoopComponent> {
        self.classes
            .iter()
            .filter(|c| is_power_of(self.element_order(c.representative), p.get()))
            .map(|c| LoopComponent {
                representative: c.representative,
                class_size: c.size(),
                centralizer: self.subgroup(&c.centralizer),
            })
            .collect()
    }

    /// Elementary divisors (prime powers, ascending) of an abelian group.
    pub fn abelian_invariants(&self) -> Option<Vec<u64>> {
        if !self.is_abelian() {
            return None;
        }
        Some(elementary_divisors(&self.element_orders, self.order as u64))
    }

    pub fn fingerprint(&self) -> Arc<GroupFingerprint> {
        self.fingerprint
            .get_or_init(|| {
                let center = self.center();
                let center_orders: Vec<u64> = center.iter().map(|&z| self.element_order(z)).collect();
                let mut noncentral: Vec<_> = self
                    .classes
                    .iter()
                    .filter(|c| c.size() > 1)
                    .map(|c| {
                        let sub = self.subgroup(&c.centralizer);
                        (c.size() as u64, self.element_order(c.representative), sub.fingerprint())
                    })
                    .collect();
                noncentral.sort();
                Arc::new(GroupFingerprint {
                    order: self.order as u64,
                    center: elementary_divisors(&center_orders, center.len() as u64),
                    noncentral,
                })
            })
            .clone()
    }
}

impl ConjugacyClass {
    fn centralizer_of(&self, g: u32, group: &FiniteGroup) -> Vec<u32> {
        if g == self.representative {
            self.centralizer.clone()
        } else {
            group.elements().filter(|&h| group.commute(h, g)).collect()
        }
    }
}

pub(crate) fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Elementary divisors of an abelian group from the multiset of its element
/// orders: for each prime `q`, `log_q #{x : x^(q^j) = 1}` grows by the number
/// of cyclic q-factors of exponent at least `j`.
pub(crate) fn elementary_divisors(orders: &[u64], group_order: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for (q, total) in factorize(group_order) {
        let mut prev = 0u32;
        let mut at_least = Vec::new();
        let mut qj = 1u64;
        for _ in 1..=total {
            qj *= q;
            let count = orders.iter().filter(|&&o| qj % o == 0).count() as u64;
            let log = count.ilog(q);
            at_least.push(log - prev);
            prev = log;
            if log == total {
                break;
            }
        }
        // at_least[j-1] = number of factors with exponent >= j
        for j in 0..at_least.len() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..(at_least[j] - next) {
                out.push(q.pow(j as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

fn is_associative(order: usize, table: &[u32], identity: u32) -> bool {
    // Light's test: the elements g with (x g) y = x (g y) for all x, y form a
    // submagma, so it suffices to check a generating set.
    let mul = |a: u32, b: u32| table[a as usize * order + b as usize];
    let mut reached = vec![false; order];
    reached[identity as usize] = true;
    let mut frontier = vec![identity];
    let mut generators = Vec::new();
    let mut seen = 1;
    let mut candidate = 0u32;
    while seen < order {
        while reached[candidate as usize] {
            candidate += 1;
        }
        generators.push(candidate);
        // re-close under right multiplication by every generator so far
        frontier.clear();
        frontier.extend((0..order as u32).filter(|&x| reached[x as usize]));
        while let Some(x) = frontier.pop() {
            for &g in &generators {
                let y = mul(x, g);
                if !reached[y as usize] {
                    reached[y as usize] = true;
                    seen += 1;
                    frontier.push(y);
                }
            }
        }
    }
    generators.iter().all(|&g| {
        (0..order as u32).all(|x| {
            let xg = mul(x, g);
            (0..order as u32).all(|y| mul(xg, y) == mul(x, mul(g, y)))
        })
    })
}

struct TupleCounter {
    /// `masks[i]`: the p-elements commuting with the i-th p-element.
    masks: Vec<Vec<u64>>,
    size: usize,
    memo: HashMap<(Vec<u64>, usize), BigUint>,
}

impl TupleCounter {
    fn new(group: &FiniteGroup, p: Prime) -> Self {
        let pel = group.p_elements(p);
        let size = pel.len();
        let words = size.div_ceil(64);
        let masks = pel
            .iter()
            .map(|&a| {
                let mut m = vec![0u64; words];
                for (j, &b) in pel.iter().enumerate() {
                    if group.commute(a, b) {
                        m[j / 64] |= 1 << (j % 64);
                    }
                }
                m
            })
            .collect();
        TupleCounter { masks, size, memo: HashMap::new() }
    }

    fn count(&mut self, n: usize) -> BigUint {
        let words = self.size.div_ceil(64);
        let mut all = vec![0u64; words];
        for j in 0..self.size {
            all[j / 64] |= 1 << (j % 64);
        }
        self.count_in(all, n)
    }

    // Pairwise commuting n-tuples drawn from `set`, where every element of
    // `set` already commutes with the earlier coordinates.
    fn count_in(&mut self, set: Vec<u64>, n: usize) -> BigUint {
        match n {
            0 => return BigUint::one(),
            1 => return BigUint::from(set.iter().map(|w| w.count_ones() as u64).sum::<u64>()),
            _ => {}
        }
        if let Some(v) = self.memo.get(&(set.clone(), n)) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for i in 0..self.size {
            if set[i / 64] & (1 << (i % 64)) == 0 {
                continue;
            }
            let next: Vec<u64> = set.iter().zip(&self.masks[i]).map(|(a, b)| a & b).collect();
            total += self.count_in(next, n - 1);
        }
        self.memo.insert((set, n), total.clone());
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupDescriptor::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn group(d: GroupDescriptor) -> FiniteGroup {
        build_group(&d).unwrap()
    }

    /// Direct enumeration of all n-tuples.
    fn naive_tuples(g: &FiniteGroup, p: Prime, n: usize) -> u64 {
        let pel = g.p_elements(p);
        let mut count = 0;
        let mut idx = vec![0usize; n];
        loop {
            let ok = (0..n).all(|i| (i + 1..n).all(|j| g.commute(pel[idx[i]], pel[idx[j]])));
            if ok {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return count;
                }
                idx[k] += 1;
                if idx[k] < pel.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn builtins() -> Vec<FiniteGroup> {
        vec![
            group(Cyclic(1)),
            group(Cyclic(2)),
            group(Cyclic(6)),
            group(Symmetric(3)),
            group(Symmetric(4)),
            group(Dihedral(8)),
            group(Dihedral(12)),
            group(GroupDescriptor::direct_product(Cyclic(2), Cyclic(2))),
            group(GroupDescriptor::wreath(Cyclic(2), 2)),
            group(GroupDescriptor::wreath(Cyclic(3), 3)),
            group(GroupDescriptor::wreath(Symmetric(3), 2)),
        ]
    }

    #[test]
    fn builder_orders() {
        assert_eq!(group(Symmetric(3)).order(), 6);
        assert_eq!(group(GroupDescriptor::wreath(Cyclic(2), 2)).order(), 8);
        assert_eq!(group(GroupDescriptor::direct_product(Cyclic(2), Cyclic(2))).order(), 4);
        assert_eq!(group(GroupDescriptor::wreath(Cyclic(3), 3)).order(), 81);
        assert_eq!(group(GroupDescriptor::wreath(Symmetric(3), 2)).order(), 72);
    }

    #[test]
    fn builder_errors() {
        assert!(matches!(build_group(&Symmetric(7)), Err(Error::InvalidInput(_))));
        assert!(matches!(build_group(&Dihedral(7)), Err(Error::InvalidInput(_))));
        assert!(matches!(build_group(&Cyclic(0)), Err(Error::InvalidInput(_))));
        let big = GroupDescriptor::wreath(Symmetric(4), 3);
        assert!(matches!(build_group(&big), Err(Error::OrderCapExceeded { order: 41472, .. })));
        assert!(build_group_with_cap(&Symmetric(3), 5).unwrap_err().is_resource());
    }

    #[test]
    fn table_validation() {
        // C2 with a wrong identity
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 0], 1).is_err());
        // not associative: a Latin square with identity 0 but no group law
        let loop5 = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteGroup::from_table(5, loop5, 0).is_err());
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 2], 0).is_err());
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 0], 0).is_ok());
    }

    #[test]
    fn class_examples() {
        let s3 = group(Symmetric(3));
        let mut sizes: Vec<_> = s3.conjugacy_classes().iter().map(|c| c.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(group(Dihedral(8)).conjugacy_classes().len(), 5);
        let c7 = group(Cyclic(7));
        assert_eq!(c7.conjugacy_classes().len(), 7);
        assert!(c7.conjugacy_classes().iter().all(|c| c.size() == 1));
    }

    #[test]
    fn centralizer_examples() {
        let s3 = group(Symmetric(3));
        let transposition = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        assert_eq!(s3.centralizer(&[transposition]).unwrap().order(), 2);
        assert_eq!(s3.centralizer(&[s3.identity()]).unwrap(), s3);
        let d8 = group(Dihedral(8));
        let rotation = d8.elements().find(|&g| d8.element_order(g) == 4).unwrap();
        assert_eq!(d8.centralizer(&[rotation]).unwrap().order(), 4);
        assert!(d8.centralizer(&[99]).is_err());
    }

    #[test]
    fn class_equation_and_centralizer_orders() {
        for g in builtins() {
            let total: usize = g.conjugacy_classes().iter().map(|c| c.size()).sum();
            assert_eq!(total, g.order());
            for c in g.conjugacy_classes() {
                assert_eq!(c.size() * c.centralizer.len(), g.order());
                assert_eq!(g.order() % c.centralizer.len(), 0);
            }
        }
    }

    #[test]
    fn tuple_count_examples() {
        let s3 = group(Symmetric(3));
        assert_eq!(s3.count_commuting_p_tuples(p(2), 0), BigUint::from(1u32));
        assert_eq!(s3.count_commuting_p_tuples(p(2), 1), BigUint::from(4u32));
        assert_eq!(s3.count_commuting_p_tuples(p(2), 2), BigUint::from(10u32));
        let c2 = group(Cyclic(2));
        for n in 0..8 {
            assert_eq!(c2.count_commuting_p_tuples(p(2), n), BigUint::from(1u32 << n));
        }
        assert_eq!(group(Dihedral(8)).count_commuting_p_tuples(p(2), 2), BigUint::from(40u32));
        assert_eq!(group(Dihedral(8)).count_commuting_p_tuples(p(2), 3), BigUint::from(176u32));
    }

    #[test]
    fn tuple_count_matches_enumeration() {
        for g in builtins().into_iter().filter(|g| g.order() <= 24) {
            for prime in [2, 3] {
                for n in 0..=3 {
                    let fast = g.count_commuting_p_tuples(p(prime), n);
                    assert_eq!(fast, BigUint::from(naive_tuples(&g, p(prime), n)), "{g:?} p={prime} n={n}");
                }
            }
        }
    }

    #[test]
    fn burnside_consistency() {
        for g in builtins() {
            for prime in [2, 3] {
                let prime = p(prime);
                let direct = g.count_commuting_p_tuples(prime, 2);
                let by_classes: BigUint = g
                    .p_loop_decomposition(prime)
                    .iter()
                    .map(|c| BigUint::from(c.class_size) * BigUint::from(c.centralizer.p_elements(prime).len()))
                    .sum();
                assert_eq!(direct, by_classes);
            }
        }
    }

    #[test]
    fn loop_recursion_at_group_level() {
        for g in builtins() {
            for prime in [2, 3] {
                let prime = p(prime);
                let parts = g.p_loop_decomposition(prime);
                for n in 0..=3 {
                    let lhs = g.count_commuting_p_tuples(prime, n + 1);
                    let rhs: BigUint = parts
                        .iter()
                        .map(|c| BigUint::from(c.class_size) * c.centralizer.count_commuting_p_tuples(prime, n))
                        .sum();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn loop_decomposition_examples() {
        let s3 = group(Symmetric(3));
        let at2 = s3.p_loop_decomposition(p(2));
        assert_eq!(at2.len(), 2);
        assert_eq!(at2[0].representative, s3.identity());
        assert_eq!(at2[0].centralizer.order(), 6);
        assert_eq!(s3.element_order(at2[1].representative), 2);
        assert_eq!(at2[1].centralizer.order(), 2);

        let at3 = s3.p_loop_decomposition(p(3));
        assert_eq!(at3.len(), 2);
        assert_eq!(s3.element_order(at3[1].representative), 3);
        assert_eq!(at3[1].centralizer.order(), 3);

        for prime in [2u64, 3, 5] {
            let cp = group(Cyclic(prime));
            let parts = cp.p_loop_decomposition(p(prime));
            assert_eq!(parts.len(), prime as usize);
            assert!(parts.iter().all(|c| c.centralizer.order() == prime as usize));
        }
    }

    #[test]
    fn abelian_invariants() {
        assert_eq!(group(Cyclic(12)).abelian_invariants(), Some(vec![3, 4]));
        assert_eq!(
            group(GroupDescriptor::direct_product(Cyclic(2), Cyclic(4))).abelian_invariants(),
            Some(vec![2, 4])
        );
        assert_eq!(group(Cyclic(1)).abelian_invariants(), Some(vec![]));
        assert_eq!(group(Symmetric(3)).abelian_invariants(), None);
        let c2c2c3 = GroupDescriptor::direct_product(GroupDescriptor::direct_product(Cyclic(2), Cyclic(2)), Cyclic(3));
        assert_eq!(group(c2c2c3).abelian_invariants(), Some(vec![2, 2, 3]));
    }

    #[test]
    fn fingerprints_separate_small_groups() {
        let d8 = group(Dihedral(8)).fingerprint();
        let c2wr = group(GroupDescriptor::wreath(Cyclic(2), 2)).fingerprint();
        assert_eq!(d8, c2wr);
        let d12 = group(Dihedral(12)).fingerprint();
        let s3c2 = group(GroupDescriptor::direct_product(Symmetric(3), Cyclic(2))).fingerprint();
        assert_eq!(d12, s3c2);
        assert_ne!(group(Cyclic(4)).fingerprint(), group(Dihedral(4)).fingerprint());
        assert_ne!(group(Symmetric(3)).fingerprint(), group(Cyclic(6)).fingerprint());
    }

    #[test]
    fn descriptor_display() {
        let d = GroupDescriptor::wreath(GroupDescriptor::direct_product(Cyclic(2), Cyclic(2)), 2);
        assert_eq!(d.to_string(), "(C2 x C2) wr C2");
        let e = GroupDescriptor::direct_product(Symmetric(3), GroupDescriptor::wreath(Cyclic(3), 3));
        assert_eq!(e.to_string(), "S3 x C3 wr C3");
    }
}
