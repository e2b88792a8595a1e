//! Finite quotients: images of the level-l congruence subgroup of SL(n;ℤ)
//! inside SL(n;ℤ/mℤ), their enumeration by breadth-first closure, abelian
//! structure by element-order census, and the cross-checks relating towers
//! of levels.
//!
//! For l | m the image of Γ_l(n) in SL(n;ℤ/mℤ) is the congruence kernel
//! {X : X ≡ I mod l}; [`enumerate_image`] constructs it by BFS over a
//! supported generating family and [`filter_enumerate`] cross-checks it by
//! brute force when the ambient matrix space is small. [`abelian_structure`]
//! recovers invariant factors from the element-order census (valid for
//! abelian groups only), and [`verify_quotient_claims`] packages the order,
//! census, product, and tower-structure checks into one report.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_integer::Integer;

use crate::exactmat::{mat_mod, ResidueMatrix};
use crate::genwords::{evaluate, gen_set, invert_word, Atom, GenFamilyTag, Word};
use crate::{Error, Result};

/// Default BFS element budget (overridable via the `CONGRUENCE_KIT_BUDGET`
/// environment variable or an explicit argument).
pub const DEFAULT_BUDGET: usize = 1 << 20;

/// Resolve the element budget: explicit override, else environment variable
/// `CONGRUENCE_KIT_BUDGET`, else [`DEFAULT_BUDGET`].
pub fn resolve_budget(explicit: Option<usize>) -> usize {
    if let Some(b) = explicit {
        return b;
    }
    if let Ok(s) = std::env::var("CONGRUENCE_KIT_BUDGET") {
        if let Ok(b) = s.trim().parse::<usize>() {
            return b;
        }
    }
    DEFAULT_BUDGET
}

/// A finite matrix group over ℤ/mℤ, closed under multiplication.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub n: usize,
    /// Ambient modulus.
    pub m: u64,
    /// Congruence level of the enumerated subgroup (its elements are ≡ I mod l).
    pub l: u64,
    /// Labelled generator images (inverses included for closure).
    pub generators: Vec<(String, ResidueMatrix)>,
    pub elements: HashSet<ResidueMatrix>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in a canonical deterministic order (sorted by their
    /// fixed-width byte serialization).
    pub fn sorted_elements(&self) -> Vec<&ResidueMatrix> {
        let mut v: Vec<&ResidueMatrix> = self.elements.iter().collect();
        v.sort_by(|a, b| a.canonical_bytes().cmp(&b.canonical_bytes()));
        v
    }

    /// Multiset of element orders: order → count.
    pub fn order_census(&self) -> BTreeMap<u64, usize> {
        let g = self.order() as u64;
        let primes = prime_factors(g);
        let mut census = BTreeMap::new();
        for x in &self.elements {
            *census.entry(element_order(x, g, &primes)).or_insert(0) += 1;
        }
        census
    }

    /// True iff all pairs of generators commute (equivalent to the whole
    /// group being abelian, since the generators generate it).
    pub fn is_abelian(&self) -> bool {
        for (_, a) in &self.generators {
            for (_, b) in &self.generators {
                if a.mul(b) != b.mul(a) {
                    return false;
                }
            }
        }
        true
    }
}

fn prime_factors(mut t: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= t {
        if t % p == 0 {
            ps.push(p);
            while t % p == 0 {
                t /= p;
            }
        }
        p += 1;
    }
    if t > 1 {
        ps.push(t);
    }
    ps
}

/// Order of `x` in a group of order `g` with prime set `primes` (divisors
/// of g): start from g and strip primes while the power stays the identity.
fn element_order(x: &ResidueMatrix, g: u64, primes: &[u64]) -> u64 {
    let mut t = g;
    for &p in primes {
        while t % p == 0 && x.pow(t / p).is_identity() {
            t /= p;
        }
    }
    t
}

/// The generating family used for the level-l subgroup at matrix size n.
///
/// l = 1 uses the elementary matrices; l = 2 uses the squared-elementary /
/// flip-product family (n = 2) or the conjugated family for n ≥ 3; n = 2
/// with l ∈ {3,…,6} uses the dedicated two-by-two families; n ≥ 3 with
/// l ≥ 2 uses the conjugated family. Anything else is unsupported.
fn generating_words(n: usize, l: u64) -> Result<Vec<(String, Word)>> {
    if n < 2 {
        return Err(Error::Unsupported(format!("n = {n} < 2")));
    }
    if l == 1 {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    out.push((
                        format!("e({i},{j})"),
                        Word::from_atoms(n, vec![Atom::elem(i, j, 1)])?,
                    ));
                }
            }
        }
        return Ok(out);
    }
    let tag = if n == 2 && l == 2 {
        GenFamilyTag::Gamma2
    } else if n == 2 && (3..=6).contains(&l) {
        GenFamilyTag::SolverD
    } else if n >= 3 {
        GenFamilyTag::X1
    } else {
        return Err(Error::Unsupported(format!(
            "no generating family for n = {n}, level {l}"
        )));
    };
    let fam = gen_set(tag, n, l)?;
    Ok(fam
        .members
        .into_iter()
        .map(|g| (g.label, g.word))
        .collect())
}

/// |SL(n;ℤ/mℤ)|, multiplicative over prime powers:
/// |SL(n;ℤ/p^a)| = p^((a−1)(n²−1)) · p^(n(n−1)/2) · ∏_{i=2..n} (p^i − 1).
/// None on u128 overflow (then certainly above any sane budget).
pub fn sl_order(n: usize, m: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut rest = m;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut a = 0u32;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            acc = acc.checked_mul(sl_order_prime_power(n, p, a)?)?;
        }
        p += 1;
    }
    if rest > 1 {
        acc = acc.checked_mul(sl_order_prime_power(n, rest, 1)?)?;
    }
    Some(acc)
}

fn sl_order_prime_power(n: usize, p: u64, a: u32) -> Option<u128> {
    let p = p as u128;
    let mut acc: u128 = 1;
    for _ in 0..(a - 1) as usize * (n * n - 1) + n * (n - 1) / 2 {
        acc = acc.checked_mul(p)?;
    }
    for i in 2..=n as u32 {
        acc = acc.checked_mul(p.checked_pow(i)? - 1)?;
    }
    Some(acc)
}

/// Exact order of the congruence kernel {X ∈ SL(n;ℤ/m) : X ≡ I mod l} for
/// l | m, used to refuse hopeless runs before BFS.
fn projected_order(n: usize, l: u64, m: u64) -> Option<u128> {
    Some(sl_order(n, m)? / sl_order(n, l)?)
}

/// BFS closure of the image of the level-l congruence subgroup in
/// SL(n;ℤ/mℤ).
///
/// Requires l | m, l ≥ 1, m ≥ 2, and a supported generating family;
/// refuses to start (and aborts midway) once the element count would
/// exceed `budget`.
pub fn enumerate_image(n: usize, l: u64, m: u64, budget: usize) -> Result<GroupTable> {
    if l < 1 || m < 2 {
        return Err(Error::Precondition(format!(
            "need l ≥ 1 and m ≥ 2, got l = {l}, m = {m}"
        )));
    }
    if m % l != 0 {
        return Err(Error::Precondition(format!("l = {l} must divide m = {m}")));
    }
    match projected_order(n, l, m) {
        Some(p) if p <= budget as u128 => {}
        _ => return Err(Error::BudgetExceeded(budget)),
    }
    let words = generating_words(n, l)?;
    let mut generators = Vec::with_capacity(2 * words.len());
    for (label, w) in &words {
        generators.push((label.clone(), mat_mod(&evaluate(w), m)?));
        generators.push((
            format!("{label}^-1"),
            mat_mod(&evaluate(&invert_word(w)), m)?,
        ));
    }
    let identity = ResidueMatrix::identity(n, m)?;
    let mut elements = HashSet::new();
    elements.insert(identity.clone());
    let mut queue = VecDeque::new();
    queue.push_back(identity);
    while let Some(x) = queue.pop_front() {
        for (_, g) in &generators {
            let y = x.mul(g);
            if !elements.contains(&y) {
                if elements.len() >= budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                elements.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(GroupTable {
        n,
        m,
        l,
        generators,
        elements,
    })
}

/// Brute-force enumeration of {X ∈ SL(n;ℤ/mℤ) : X ≡ I mod l} by scanning
/// every matrix with the right residues. Only feasible for tiny parameter
/// ranges; refuses anything beyond ~2²⁴ candidate matrices or n > 4.
pub fn filter_enumerate(n: usize, l: u64, m: u64) -> Result<HashSet<ResidueMatrix>> {
    if n < 2 || n > 4 {
        return Err(Error::Unsupported(format!(
            "filter enumeration limited to 2 ≤ n ≤ 4, got {n}"
        )));
    }
    if l < 1 || m < 2 || m % l != 0 {
        return Err(Error::Precondition(format!(
            "need l | m with m ≥ 2, got l = {l}, m = {m}"
        )));
    }
    let choices = (m / l) as u128;
    let cells = n * n;
    let mut total: u128 = 1;
    for _ in 0..cells {
        total = total.saturating_mul(choices);
    }
    if total > 1 << 24 {
        return Err(Error::Unsupported(format!(
            "filter enumeration of {total} candidates is infeasible"
        )));
    }
    let mut out = HashSet::new();
    // Entry (i,j) runs over residues ≡ δ_ij mod l: value = δ_ij + l·c, c < m/l.
    let mut counters = vec![0u64; cells];
    loop {
        let entries: Vec<u64> = (0..cells)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let delta = if i == j { 1 } else { 0 };
                (delta + l * counters[idx]) % m
            })
            .collect();
        let cand = ResidueMatrix::from_entries(n, m, entries)?;
        if cand.det_mod() == 1 % m {
            out.insert(cand);
        }
        // Odometer increment.
        let mut idx = 0;
        loop {
            if idx == cells {
                return Ok(out);
            }
            counters[idx] += 1;
            if counters[idx] < m / l {
                break;
            }
            counters[idx] = 0;
            idx += 1;
        }
    }
}

/// Invariant factors d₁ | d₂ | … of a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AbelianStructure {
    pub factors: Vec<u64>,
}

/// Recover the invariant factors of an abelian [`GroupTable`] from its
/// element-order census.
///
/// For each prime p dividing the order, N_k = #{x : x^(p^k) = 1} determines
/// the number of cyclic p-power factors of each exponent: with
/// c_k = v_p(N_k) − v_p(N_{k−1}), exactly c_k − c_{k+1} factors equal p^k.
/// The per-prime factor lists are then interleaved largest-with-largest to
/// produce the divisibility chain. Errors on non-abelian input.
pub fn abelian_structure(t: &GroupTable) -> Result<AbelianStructure> {
    if !t.is_abelian() {
        return Err(Error::NonAbelian(format!(
            "group of order {} has non-commuting generators",
            t.order()
        )));
    }
    let g = t.order() as u64;
    if g == 1 {
        return Ok(AbelianStructure { factors: vec![] });
    }
    let census = t.order_census();
    // Per prime: list of cyclic factor sizes p^k, descending.
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    for &p in &prime_factors(g) {
        // N_k = number of elements whose order divides p^k, i.e. whose order
        // is a power of p at most p^k (orders here are exact divisors of g).
        let max_k = {
            let mut a = 0;
            let mut gg = g;
            while gg % p == 0 {
                gg /= p;
                a += 1;
            }
            a
        };
        let n_of = |k: u32| -> u64 {
            let cap = p.pow(k);
            census
                .iter()
                .filter(|(ord, _)| {
                    let mut o = **ord;
                    while o % p == 0 {
                        o /= p;
                    }
                    o == 1 && **ord <= cap
                })
                .map(|(_, c)| *c as u64)
                .sum()
        };
        let vp = |x: u64| -> u32 {
            let mut v = 0;
            let mut x = x;
            while x % p == 0 {
                x /= p;
                v += 1;
            }
            v
        };
        // c_k = number of cyclic factors with exponent ≥ k.
        let c: Vec<u32> = (0..=max_k + 1)
            .map(|k| {
                if k == 0 {
                    0
                } else {
                    vp(n_of(k)) - vp(n_of(k - 1))
                }
            })
            .collect();
        let mut sizes = Vec::new();
        for k in 1..=max_k {
            let mult = c[k as usize] - c[k as usize + 1];
            for _ in 0..mult {
                sizes.push(p.pow(k));
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(sizes);
    }
    // Interleave: the largest invariant factor takes the largest p-power of
    // every prime, and so on down.
    let rank = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for slot in 0..rank {
        let mut f = 1u64;
        for sizes in &per_prime {
            if slot < sizes.len() {
                f *= sizes[slot];
            }
        }
        factors.push(f);
    }
    factors.reverse(); // ascending, d₁ | d₂ | …
    let product: u128 = factors.iter().map(|&f| f as u128).product();
    if product != g as u128 {
        return Err(Error::Consistency(format!(
            "census decomposition product {product} ≠ group order {g}"
        )));
    }
    Ok(AbelianStructure { factors })
}

/// Report of the tower/product/structure checks for a level pair (l, m).
#[derive(Clone, Debug, serde::Serialize)]
pub struct QuotientReport {
    pub n: usize,
    pub l: u64,
    pub m: u64,
    pub gcd: u64,
    pub lcm: u64,
    /// Orders of every image enumerated along the way, keyed
    /// "image(n,level,modulus)".
    pub orders: BTreeMap<String, usize>,
    /// Order + element-order-census agreement between the image of Γ_gcd in
    /// SL(n;ℤ/m) and the image of Γ_l in SL(n;ℤ/lcm).
    pub census_match: bool,
    /// Census of the first group in the comparison (order → count).
    pub census: BTreeMap<u64, usize>,
    /// |Γ_gcd/Γ_lcm| = |Γ_gcd/Γ_l| · |Γ_gcd/Γ_m|.
    pub product_order: bool,
    /// When l | m and m | l²: the image of Γ_l in SL(n;ℤ/m) is abelian with
    /// invariant factors (m/l)^(n²−1). None when the hypothesis fails.
    pub tower_structure: Option<bool>,
    pub tower_factors: Option<Vec<u64>>,
    /// When gcd(l,m) = 1: |SL(n;ℤ/lm)| = |SL(n;ℤ/l)|·|SL(n;ℤ/m)|.
    pub coprime_product: Option<bool>,
    /// n = 2 results are data only: the structural statements are proved
    /// for n ≥ 3.
    pub n2_data_only: bool,
    pub failures: Vec<String>,
    pub all_pass: bool,
}

/// Enumerate with memoization on (level, modulus).
struct Enumerator {
    n: usize,
    budget: usize,
    cache: HashMap<(u64, u64), GroupTable>,
}

impl Enumerator {
    fn get(&mut self, l: u64, m: u64) -> Result<&GroupTable> {
        if !self.cache.contains_key(&(l, m)) {
            let t = enumerate_image(self.n, l, m, self.budget)?;
            self.cache.insert((l, m), t);
        }
        Ok(&self.cache[&(l, m)])
    }
}

/// Run the order, census, product, and tower-structure checks for levels
/// (l, m) at matrix size n. Claim violations are reported (with details in
/// `failures`), not raised; errors are reserved for unsupported parameters
/// and budget exhaustion.
pub fn verify_quotient_claims(n: usize, l: u64, m: u64, budget: usize) -> Result<QuotientReport> {
    if l < 2 || m < 2 {
        return Err(Error::Precondition(format!(
            "levels must be ≥ 2, got l = {l}, m = {m}"
        )));
    }
    let g = l.gcd(&m);
    let lc = l.lcm(&m);
    let mut en = Enumerator {
        n,
        budget,
        cache: HashMap::new(),
    };
    let mut orders = BTreeMap::new();
    let mut failures = Vec::new();

    // (1) Γ_gcd/Γ_m ≅ Γ_l/Γ_lcm, checked as order + census equality.
    let (census_a, order_a) = {
        let a = en.get(g, m)?;
        (a.order_census(), a.order())
    };
    let (census_b, order_b) = {
        let b = en.get(l, lc)?;
        (b.order_census(), b.order())
    };
    orders.insert(format!("image({n},{g},{m})"), order_a);
    orders.insert(format!("image({n},{l},{lc})"), order_b);
    let census_match = order_a == order_b && census_a == census_b;
    if !census_match {
        failures.push(format!(
            "census mismatch: image({n},{g},{m}) order {order_a} vs image({n},{l},{lc}) order {order_b}"
        ));
    }

    // (2) |Γ_gcd/Γ_lcm| = |Γ_gcd/Γ_l| · |Γ_gcd/Γ_m|.
    let order_glc = en.get(g, lc)?.order();
    let order_gl = if l == g { 1 } else { en.get(g, l)?.order() };
    let order_gm = if m == g { 1 } else { en.get(g, m)?.order() };
    orders.insert(format!("image({n},{g},{lc})"), order_glc);
    if l != g {
        orders.insert(format!("image({n},{g},{l})"), order_gl);
    }
    let product_order = order_glc == order_gl * order_gm;
    if !product_order {
        failures.push(format!(
            "product mismatch: {order_glc} ≠ {order_gl} · {order_gm}"
        ));
    }

    // (3) Tower structure when l | m | l².
    let (tower_structure, tower_factors) = if m % l == 0 && (l * l) % m == 0 {
        let t = en.get(l, m)?;
        orders.insert(format!("image({n},{l},{m})"), t.order());
        let q = m / l;
        let expected: Vec<u64> = if q == 1 {
            vec![]
        } else {
            vec![q; n * n - 1]
        };
        match abelian_structure(t) {
            Ok(s) => {
                let ok = s.factors == expected;
                if !ok {
                    failures.push(format!(
                        "tower structure mismatch: factors {:?}, expected ({q})^{}",
                        s.factors,
                        n * n - 1
                    ));
                }
                (Some(ok), Some(s.factors))
            }
            Err(Error::NonAbelian(_)) => {
                failures.push(format!("image({n},{l},{m}) is not abelian"));
                (Some(false), None)
            }
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };

    // Coprime levels: the full reduction orders multiply.
    let coprime_product = if g == 1 {
        let o_lm = en.get(1, l * m)?.order();
        let o_l = en.get(1, l)?.order();
        let o_m = en.get(1, m)?.order();
        orders.insert(format!("image({n},1,{})", l * m), o_lm);
        orders.insert(format!("image({n},1,{l})"), o_l);
        orders.insert(format!("image({n},1,{m})"), o_m);
        let ok = o_lm == o_l * o_m;
        if !ok {
            failures.push(format!("coprime product mismatch: {o_lm} ≠ {o_l} · {o_m}"));
        }
        Some(ok)
    } else {
        None
    };

    let all_pass = failures.is_empty();
    Ok(QuotientReport {
        n,
        l,
        m,
        gcd: g,
        lcm: lc,
        orders,
        census_match,
        census: census_a,
        product_order,
        tower_structure,
        tower_factors,
        coprime_product,
        n2_data_only: n == 2,
        failures,
        all_pass,
    })
}
