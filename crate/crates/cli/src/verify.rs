//! The verification harness: a registry of named checks, each re-proving
//! one family of identities at the configured weight bound, run
//! concurrently over a work queue and assembled into a deterministic
//! report.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use kucomm_core::charcls::{
    chern_from_powersums, powersum_from_chern, powersum_varset, splitting_pullback,
    low_rank_relation_check, verify_u2_table,
};
use kucomm_core::exact::{factorial, int, rat, rat_frac, stirling1, stirling2, CombCache, Int, Rat};
use kucomm_core::gens::monomials_of_weight;
use kucomm_core::hopf::{
    circ, circ_pow, coproduct, hurewicz, pairing, star, verify_hurewicz_formula, HopfElem,
};
use kucomm_core::ku::{
    bcomu_membership, divided_form, f_mul, factorial_times_y, homotopy_rank, iota, ku_mul,
    ku_series_oracle, phi_k, y1_power_coefficient, KuElem, KuKey,
};
use kucomm_core::multisym::{comult_pullback, expand_z, express_in_z, mu_pullback_oracle, MSymExpr};
use kucomm_core::poly::MPoly;
use kucomm_core::s4::verify_kcoms4;

#[derive(Debug, Clone)]
pub struct Config {
    pub max_weight: u32,
    pub seed: u64,
    pub trials: u32,
    pub only: Option<Vec<String>>,
    pub inject_fault: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_weight: 10,
            seed: 7,
            trials: 200,
            only: None,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Ok(String),
    Flagged(String),
    Fail(String),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CheckRow {
    pub name: String,
    /// `ok`, `flagged` or `fail`
    pub status: String,
    pub detail: String,
    pub wall_ms: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    /// `ok` iff no check failed (flags do not fail the run)
    pub status: String,
    pub max_weight: u32,
    pub seed: u64,
    pub trials: u32,
    pub checks: Vec<CheckRow>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Name of the first failing check, in report order.
    pub fn first_failure(&self) -> Option<&str> {
        self.checks
            .iter()
            .find(|c| c.status == "fail")
            .map(|c| c.name.as_str())
    }

    /// Copy with the timing fields zeroed, for byte-level comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_ms = 0;
        }
        r
    }
}

type CheckFn = fn(&Config, &mut ChaCha8Rng) -> Outcome;

pub fn registry() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("circ-laws", check_circ_laws),
        ("comultiplication-formula", check_comult_formula),
        ("express-roundtrip", check_express_roundtrip),
        ("homotopy-ranks", check_homotopy_ranks),
        ("hopf-ideal-membership", check_hopf_ideal),
        ("hopf-zeta-presentation", check_zeta_presentation),
        ("hurewicz-formula", check_hurewicz_formula),
        ("hurewicz-multiplicative", check_hurewicz_multiplicative),
        ("iota-ring-map", check_iota),
        ("ku-divided-form", check_divided_form),
        ("ku-product-series", check_product_series),
        ("low-rank-relations", check_low_rank_relations),
        ("mu-pullback", check_mu_pullback),
        ("newton-roundtrip", check_newton),
        ("pairing-adjunction", check_pairing_adjunction),
        ("phi-operations", check_phi),
        ("rat-field-axioms", check_rat_field),
        ("s4-classes", check_s4),
        ("splitting-coefficients", check_splitting),
        ("stirling-tables", check_stirling),
        ("u2-table", check_u2_table),
    ]
}

pub fn check_names() -> Vec<&'static str> {
    registry().into_iter().map(|(n, _)| n).collect()
}

fn mix_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the name, folded into the master seed
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ seed.wrapping_mul(0x9e3779b97f4a7c15)
}

/// Run the selected checks concurrently over a work queue; rows are
/// assembled in registry (name) order so the report is deterministic.
pub fn run_checks(cfg: &Config) -> Result<Report, String> {
    let all = registry();
    let selected: Vec<(&'static str, CheckFn)> = match &cfg.only {
        None => all,
        Some(names) => {
            let mut out = Vec::new();
            for want in names {
                match all.iter().find(|(n, _)| n == want) {
                    Some(pair) => out.push(*pair),
                    None => {
                        return Err(format!(
                            "unknown check '{want}' (known: {})",
                            check_names().join(", ")
                        ))
                    }
                }
            }
            out
        }
    };

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<CheckRow>> = Mutex::new(Vec::with_capacity(selected.len()));
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(selected.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= selected.len() {
                    break;
                }
                let (name, f) = selected[i];
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, name));
                let start = Instant::now();
                let outcome = f(cfg, &mut rng);
                let wall_ms = start.elapsed().as_millis() as u64;
                let (status, detail) = match outcome {
                    Outcome::Ok(d) => ("ok", d),
                    Outcome::Flagged(d) => ("flagged", d),
                    Outcome::Fail(d) => ("fail", d),
                };
                results.lock().unwrap().push(CheckRow {
                    name: name.to_string(),
                    status: status.to_string(),
                    detail,
                    wall_ms,
                });
            });
        }
    });

    let mut checks = results.into_inner().unwrap();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let status = if checks.iter().any(|c| c.status == "fail") {
        "fail"
    } else {
        "ok"
    };
    Ok(Report {
        status: status.to_string(),
        max_weight: cfg.max_weight,
        seed: cfg.seed,
        trials: cfg.trials,
        checks,
    })
}

// ---------------------------------------------------------------------------
// random element generators
// ---------------------------------------------------------------------------

fn random_ku(rng: &mut ChaCha8Rng, max_weight: u32, max_terms: usize) -> KuElem {
    let mut e = KuElem::zero();
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let w = rng.gen_range(0..=max_weight);
        let n = rng.gen_range(0..=w);
        let c = rng.gen_range(-9i64..=9);
        e.add_term(KuKey::new(w - n, n), int(c));
    }
    e
}

fn random_ku_member(rng: &mut ChaCha8Rng, max_weight: u32, max_terms: usize) -> KuElem {
    let mut e = KuElem::zero();
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let w = rng.gen_range(1..=max_weight.max(1));
        let n = rng.gen_range(1..=w);
        let c = rng.gen_range(-9i64..=9);
        e.add_term(KuKey::new(w - n, n), int(c));
    }
    e
}

fn random_hopf0(rng: &mut ChaCha8Rng, max_weight: u32, max_terms: usize) -> HopfElem {
    use kucomm_core::gens::{GenIdx, GenMono};
    let mut e = HopfElem::zero();
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let mut gens = Vec::new();
        let mut budget = rng.gen_range(0..=max_weight);
        while budget > 0 {
            let w = rng.gen_range(1..=budget);
            let a = rng.gen_range(0..=w);
            gens.push(GenIdx::new(a, w - a));
            budget -= w;
            if gens.len() >= 3 {
                break;
            }
        }
        let c = rng.gen_range(-4i64..=4);
        e.add_term((0, GenMono::from_indices(gens)), rat(c));
    }
    e
}

// ---------------------------------------------------------------------------
// the checks
// ---------------------------------------------------------------------------

fn check_stirling(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let mut cache = CombCache::with_bound(20);
    for n in 0..=20 {
        for m in 0..=20 {
            let mut acc = Int::from(0);
            for k in 0..=n {
                acc += cache.stirling1(n, k) * cache.stirling2(k, m);
            }
            let expected = if n == m { Int::from(1) } else { Int::from(0) };
            if acc != expected {
                return Outcome::Fail(format!("Stirling inversion broke at (n,m)=({n},{m})"));
            }
        }
    }
    // spot values against the defining recurrences; the injected fault
    // corrupts one expected table entry to exercise the harness itself
    let expected_s2_32 = if cfg.inject_fault { int(4) } else { int(3) };
    if stirling2(3, 2) != expected_s2_32 {
        return Outcome::Fail(format!(
            "stirling2(3,2) = {}, table says {}",
            stirling2(3, 2),
            expected_s2_32
        ));
    }
    if stirling1(2, 1) != int(-1) || stirling1(3, 2) != int(-3) {
        return Outcome::Fail("signed first-kind values are off".into());
    }
    Outcome::Ok("inversion through n = 20 plus spot values".into())
}

fn check_rat_field(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..cfg.trials {
        let a = rat_frac(rng.gen_range(-40..=40), rng.gen_range(1..=12));
        let b = rat_frac(rng.gen_range(-40..=40), rng.gen_range(1..=12));
        let c = rat_frac(rng.gen_range(-40..=40), rng.gen_range(1..=12));
        let assoc = (a.clone() + b.clone()) + c.clone() == a.clone() + (b.clone() + c.clone());
        let dist = a.clone() * (b.clone() + c.clone())
            == a.clone() * b.clone() + a.clone() * c.clone();
        let comm = a.clone() * b.clone() == b.clone() * a.clone();
        if !(assoc && dist && comm) {
            return Outcome::Fail(format!("field axiom failed on ({a}, {b}, {c})"));
        }
    }
    Outcome::Ok(format!("{} random triples", cfg.trials))
}

fn check_product_series(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.min(8);
    for m in 0..=bound {
        for n in m..=bound {
            let closed = ku_mul(&KuElem::y(m), &KuElem::y(n));
            let series = match ku_series_oracle(m, n, m + n) {
                Ok(s) => s,
                Err(e) => return Outcome::Fail(format!("series oracle failed: {e}")),
            };
            if closed != series {
                return Outcome::Fail(format!("y_{m} * y_{n}: {closed} vs series {series}"));
            }
        }
    }
    for n in 1..=bound.max(1) {
        let p = ku_mul(&KuElem::y(1), &KuElem::y(n));
        let mut expected = KuElem::zero();
        expected.add_term(KuKey::new(0, n + 1), int((n + 1) as i64));
        expected.add_term(KuKey::new(1, n), int(n as i64));
        if p != expected {
            return Outcome::Fail(format!("y_1 y_{n} = {p}, expected {expected}"));
        }
    }
    Outcome::Ok(format!("products through weight {bound} match the series"))
}

fn check_divided_form(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.clamp(1, 10);
    for n in 1..=bound {
        if divided_form(n) != factorial_times_y(n) {
            return Outcome::Fail(format!("divided form differs from {}! y_{n}", n));
        }
    }
    Outcome::Ok(format!("n <= {bound}"))
}

fn check_homotopy_ranks(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    for n in 0..=20 {
        if homotopy_rank(n) != n {
            return Outcome::Fail(format!("rank at weight {n} is {}", homotopy_rank(n)));
        }
    }
    let bound = cfg.max_weight.min(8);
    for w in 0..=bound {
        for n in 0..=w {
            let key = KuElem::term(w - n, n, int(1));
            let (in_u, in_su) = bcomu_membership(&key);
            let expect_u = n >= 1;
            let expect_su = n >= 2 || (n == 1 && w - n >= 1);
            if (in_u, in_su) != (expect_u, expect_su) {
                return Outcome::Fail(format!("membership of u^{} y_{n} came out ({in_u},{in_su})", w - n));
            }
        }
    }
    Outcome::Ok("ranks to 20, membership on the basis through weight 8".into())
}

fn check_iota(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let w = cfg.max_weight.min(8);
    for _ in 0..cfg.trials {
        let p = random_ku(rng, w, 5);
        let q = random_ku(rng, w, 5);
        if iota(&ku_mul(&p, &q)) != f_mul(&iota(&p), &iota(&q)) {
            return Outcome::Fail(format!("iota broke multiplicativity on {p} and {q}"));
        }
    }
    for n in 2..=8u32 {
        if !iota(&KuElem::y(n)).is_zero() {
            return Outcome::Fail(format!("iota(y_{n}) nonzero"));
        }
    }
    use kucomm_core::ku::FElem;
    if f_mul(&FElem::x(), &FElem::x()) != FElem::term(1, true, int(1)) {
        return Outcome::Fail("x^2 != u x".into());
    }
    Outcome::Ok(format!("{} random pairs at weight <= {w}", cfg.trials))
}

fn check_phi(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    for k in -5..=5i64 {
        if phi_k(k, &KuElem::y(1)) != KuElem::y(1).scale(&int(k)) {
            return Outcome::Fail(format!("power operation on y_1 at k = {k}"));
        }
    }
    let w = cfg.max_weight.min(6);
    for _ in 0..cfg.trials.min(100) {
        let p = random_ku(rng, w, 4);
        let q = random_ku(rng, w, 4);
        let k = rng.gen_range(-2i64..=3);
        let l = rng.gen_range(-2i64..=3);
        if phi_k(k, &ku_mul(&p, &q)) != ku_mul(&phi_k(k, &p), &phi_k(k, &q)) {
            return Outcome::Fail(format!("not a ring map at k = {k}"));
        }
        if phi_k(k, &phi_k(l, &p)) != phi_k(k * l, &p) {
            return Outcome::Fail(format!("composition law broke at ({k},{l})"));
        }
    }
    Outcome::Ok(format!("|k| <= 5 on y_1; ring/composition laws at weight <= {w}"))
}

fn check_zeta_presentation(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    use kucomm_core::gens::{GenIdx, GenMono};
    let bound = cfg.max_weight.min(10);
    for a in 0..=bound {
        for b in 0..=(bound - a) {
            if a + b == 0 {
                continue;
            }
            let lhs = HopfElem::term(
                0,
                GenMono::single(GenIdx::new(a, b)),
                Rat::from_integer(factorial(a) * factorial(b)),
            );
            let rhs = match (a, b) {
                (0, b) => circ_pow(&HopfElem::zeta(0, 1), b),
                (a, 0) => circ_pow(&HopfElem::zeta(1, 0), a),
                (a, b) => circ(
                    &circ_pow(&HopfElem::zeta(1, 0), a),
                    &circ_pow(&HopfElem::zeta(0, 1), b),
                ),
            };
            if lhs != rhs {
                return Outcome::Fail(format!("presentation of zeta({a},{b}): {lhs} vs {rhs}"));
            }
        }
    }
    Outcome::Ok(format!("a + b <= {bound}"))
}

fn check_circ_laws(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let w = cfg.max_weight.min(6);
    let triples = cfg.trials.min(200);
    for _ in 0..triples {
        let p = random_hopf0(rng, w, 2);
        let q = random_hopf0(rng, w, 2);
        let r = random_hopf0(rng, w, 2);
        if circ(&p, &q) != circ(&q, &p) {
            return Outcome::Fail(format!("commutativity broke on {p}, {q}"));
        }
        if circ(&circ(&p, &q), &r) != circ(&p, &circ(&q, &r)) {
            return Outcome::Fail("associativity broke".into());
        }
    }
    // distributivity through the coproduct, the defining identity,
    // evaluated in an independent order
    let samples = [
        HopfElem::grouplike(2).add(&HopfElem::zeta(0, 1)),
        HopfElem::term(
            0,
            kucomm_core::gens::GenMono::from_indices(vec![
                kucomm_core::gens::GenIdx::new(1, 0),
                kucomm_core::gens::GenIdx::new(0, 1),
            ]),
            rat(1),
        ),
        HopfElem::zeta(1, 1),
    ];
    for x in &samples {
        for y in &samples {
            for z in &samples {
                let lhs = circ(x, &star(y, z));
                let mut rhs = HopfElem::zero();
                for ((xl, xr), c) in coproduct(x).terms() {
                    let left = circ(&HopfElem::term(xl.0, xl.1.clone(), rat(1)), y);
                    let right = circ(&HopfElem::term(xr.0, xr.1.clone(), rat(1)), z);
                    rhs = rhs.add(&star(&left, &right).scale(c));
                }
                if lhs != rhs {
                    return Outcome::Fail("distributivity broke".into());
                }
            }
        }
    }
    Outcome::Ok(format!("{triples} random triples at weight <= {w}, plus distributivity"))
}

fn check_hurewicz_formula(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.clamp(1, 10);
    for row in verify_hurewicz_formula(bound) {
        if !row.ok {
            return Outcome::Fail(format!(
                "n = {}: closed {} vs oracle {}",
                row.n, row.closed, row.oracle
            ));
        }
    }
    Outcome::Ok(format!("Stirling form equals the divided circle product for n <= {bound}"))
}

fn check_hurewicz_multiplicative(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let w = cfg.max_weight.min(6);
    for _ in 0..cfg.trials {
        let p = random_ku(rng, w, 3);
        let q = random_ku(rng, w, 3);
        if hurewicz(&ku_mul(&p, &q)) != circ(&hurewicz(&p), &hurewicz(&q)) {
            return Outcome::Fail(format!("multiplicativity broke on {p} and {q}"));
        }
    }
    Outcome::Ok(format!("{} random pairs at weight <= {w}", cfg.trials))
}

fn check_hopf_ideal(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let w = cfg.max_weight.clamp(1, 8);
    for _ in 0..cfg.trials {
        let p = random_ku_member(rng, w, 4);
        if !bcomu_membership(&p).0 {
            continue;
        }
        if !hurewicz(&p).in_b_positive_ideal() {
            return Outcome::Fail(format!("image of {p} escapes the ideal"));
        }
    }
    Outcome::Ok(format!("{} random ideal members", cfg.trials))
}

fn check_mu_pullback(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.clamp(1, 5);
    for total in 1..=bound {
        for a in 0..=total {
            let b = total - a;
            let rank = total as usize;
            let r = match mu_pullback_oracle(a, b, rank, rank) {
                Ok(r) => r,
                Err(e) => return Outcome::Fail(format!("oracle failed on z({a},{b}): {e}")),
            };
            if !r.hypothesis_met {
                return Outcome::Fail(format!("hypothesis unexpectedly unmet at ({a},{b})"));
            }
            if r.computed != r.formula {
                return Outcome::Fail(format!(
                    "z({a},{b}) at ranks ({rank},{rank}): {} vs {}",
                    r.computed, r.formula
                ));
            }
        }
    }
    Outcome::Ok(format!("concrete pullback equals the closed formula for a + b <= {bound}"))
}

fn check_pairing_adjunction(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    use kucomm_core::gens::{GenIdx, GenMono};
    use kucomm_core::multisym::mu_closed_of_monomial;
    let gen_bound = cfg.max_weight.min(3);
    let mut gens = Vec::new();
    for t in 1..=gen_bound {
        for a in 0..=t {
            gens.push((a, t - a));
        }
    }
    for &(a, b) in &gens {
        for &(c, d) in &gens {
            let w = a + b + c + d;
            let (m, n) = (w as usize, w as usize);
            for mono in monomials_of_weight(w, false) {
                let pulled = mu_closed_of_monomial(&mono, m, n);
                let lhs: Rat = pulled
                    .terms()
                    .map(|((l, r), coeff)| {
                        coeff.clone()
                            * pairing(l, &GenMono::single(GenIdx::new(a, b)))
                            * pairing(r, &GenMono::single(GenIdx::new(c, d)))
                    })
                    .sum();
                let push_main = Rat::from_integer(
                    kucomm_core::exact::binom(a + c, c) * kucomm_core::exact::binom(b + d, b),
                ) * pairing(&mono, &GenMono::single(GenIdx::new(a + c, b + d)));
                let push_cross = Rat::from_integer(Int::from((m * n) as u64))
                    * pairing(
                        &mono,
                        &GenMono::from_indices(vec![GenIdx::new(a, b), GenIdx::new(c, d)]),
                    );
                if lhs != push_main + push_cross {
                    return Outcome::Fail(format!(
                        "adjunction broke at ({a},{b}),({c},{d}) against {mono}"
                    ));
                }
            }
        }
    }
    Outcome::Ok(format!("generator pairs with weights <= {gen_bound}"))
}

fn check_splitting(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.clamp(1, 10);
    for b in 1..=bound {
        for k in 1..=b {
            if y1_power_coefficient(b, k) != factorial(k) * stirling2(b, k) {
                return Outcome::Fail(format!("coefficient of u^{}(y_{k}) in y_1^{b}", b - k));
            }
        }
    }
    let comult_bound = cfg.max_weight.clamp(1, 8);
    for n in 1..=comult_bound {
        let split = splitting_pullback(1, n);
        let comult = match comult_pullback(n, n as usize) {
            Ok(c) => c,
            Err(e) => return Outcome::Fail(format!("comultiplication failed at n = {n}: {e}")),
        };
        if split != comult.computed {
            return Outcome::Fail(format!(
                "k = 1 splitting differs from the comultiplication at n = {n}: {split} vs {}",
                comult.computed
            ));
        }
    }
    Outcome::Ok(format!("Stirling coefficients b <= {bound}; k = 1 column n <= {comult_bound}"))
}

fn check_comult_formula(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.clamp(1, 8);
    for n in 1..=bound {
        for k in n as usize..=bound as usize {
            let r = match comult_pullback(n, k) {
                Ok(r) => r,
                Err(e) => return Outcome::Fail(format!("n = {n}, k = {k}: {e}")),
            };
            if !r.in_validated_range {
                return Outcome::Fail(format!("range flag wrong at n = {n}, k = {k}"));
            }
            if r.computed != r.formula {
                return Outcome::Fail(format!(
                    "n = {n}, k = {k}: {} vs {}",
                    r.computed, r.formula
                ));
            }
        }
    }
    Outcome::Ok(format!("binomial coefficients for n <= k <= {bound}"))
}

fn check_newton(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.clamp(1, 10);
    for n in 1..=bound {
        let zc = powersum_from_chern(n);
        let images: Vec<Option<MPoly<Rat>>> = (1..=n)
            .map(|k| {
                let small = chern_from_powersums(k);
                let vars = powersum_varset(n);
                let mut padded = MPoly::zero(vars.clone());
                for (m, c) in small.terms() {
                    let mut exps = m.exps().to_vec();
                    exps.resize(n as usize, 0);
                    padded.add_term(&exps, c.clone()).expect("arity");
                }
                Some(padded)
            })
            .collect();
        let back = match zc.substitute(powersum_varset(n), &images) {
            Ok(b) => b,
            Err(e) => return Outcome::Fail(format!("substitution failed at n = {n}: {e}")),
        };
        if back != MPoly::var(powersum_varset(n), n as usize - 1) {
            return Outcome::Fail(format!("round trip broke at n = {n}"));
        }
    }
    Outcome::Ok(format!("n <= {bound}"))
}

fn check_express_roundtrip(cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let bound = cfg.max_weight.clamp(1, 8);
    for total in 1..=bound {
        for a in 0..=total {
            let b = total - a;
            let n = total as usize;
            let p = match expand_z::<Rat>(a, b, n) {
                Ok(p) => p,
                Err(e) => return Outcome::Fail(format!("expansion failed: {e}")),
            };
            match express_in_z(&p, n, true) {
                Ok(e) if e == MSymExpr::gen(a, b) => {}
                Ok(e) => return Outcome::Fail(format!("z({a},{b}) came back as {e}")),
                Err(e) => return Outcome::Fail(format!("z({a},{b}): {e}")),
            }
        }
    }
    Outcome::Ok(format!("generators with a + b <= {bound}"))
}

fn check_u2_table(_cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let report = verify_u2_table();
    let mut details = Vec::new();
    for row in &report.rows {
        if !row.ok {
            details.push(format!(
                "row {}: stable side {} vs claimed side {}",
                row.name, row.stable_side, row.claimed_side
            ));
        }
        if !row.su_ok {
            details.push(format!("row {}: SU column mismatch", row.name));
        }
    }
    if !report.relations_vanish {
        details.push("a defining relation has nonzero image".to_string());
    }
    if !report.injectivity_ok {
        details.push("comparison map not injective through weight 6".to_string());
    }
    if !report.torsion_ok || !report.torsion_classes_nonzero {
        details.push("torsion structure off".to_string());
    }
    if details.is_empty() {
        Outcome::Ok("all rows, relations, injectivity and torsion checks hold".into())
    } else {
        Outcome::Fail(details.join("; "))
    }
}

fn check_low_rank_relations(_cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let report = low_rank_relation_check(3);
    if !report.rank3_kernels.iter().all(|(_, dim)| *dim == 0) {
        return Outcome::Fail(format!("rank-3 kernels: {:?}", report.rank3_kernels));
    }
    if report.rank2_weight3.len() != 1 {
        return Outcome::Fail(format!(
            "rank-2 weight-3 kernel has dimension {}",
            report.rank2_weight3.len()
        ));
    }
    let rel = format!("{}", report.rank2_weight3[0]);
    if rel != "2*z(0,3) - 3*z(0,1)*z(0,2) + z(0,1)^3" {
        return Outcome::Fail(format!("unexpected rank-2 relation {rel}"));
    }
    if report.z03_in_z01_ideal {
        return Outcome::Fail("z(0,3) claimed to be a multiple of z(0,1) at rank 3".into());
    }
    Outcome::Ok("no relations at rank 3 through weight 3; classical rank-2 relation recovered".into())
}

fn check_s4(_cfg: &Config, _rng: &mut ChaCha8Rng) -> Outcome {
    let r = verify_kcoms4();
    if format!("{}", r.image_v) != "-u*y1" {
        return Outcome::Fail(format!("image of v is {}", r.image_v));
    }
    if format!("{}", r.image_w) != "u*y1 + 2*y2" {
        return Outcome::Fail(format!("image of w is {}", r.image_w));
    }
    if format!("{}", r.image_mid) != "y2" {
        return Outcome::Fail(format!("image of (v+w)/2 is {}", r.image_mid));
    }
    if r.determinant.abs() != 1 {
        return Outcome::Fail(format!("basis determinant {}", r.determinant));
    }
    Outcome::Ok(format!(
        "images ({}, {}, {}), determinant {}",
        r.image_v, r.image_w, r.image_mid, r.determinant
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_sorted_and_unique() {
        let names = check_names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
    }

    #[test]
    fn fast_checks_pass() {
        let cfg = Config {
            max_weight: 4,
            trials: 20,
            ..Config::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in [
            "stirling-tables",
            "ku-divided-form",
            "homotopy-ranks",
            "s4-classes",
            "express-roundtrip",
        ] {
            let (_, f) = registry().into_iter().find(|(n, _)| *n == name).unwrap();
            match f(&cfg, &mut rng) {
                Outcome::Ok(_) => {}
                other => panic!("{name}: {other:?}"),
            }
        }
    }

    #[test]
    fn fault_injection_fails_the_stirling_check() {
        let cfg = Config {
            inject_fault: true,
            ..Config::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        match check_stirling(&cfg, &mut rng) {
            Outcome::Fail(msg) => assert!(msg.contains("stirling2(3,2)")),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn unknown_check_is_rejected() {
        let cfg = Config {
            only: Some(vec!["no-such-check".to_string()]),
            ..Config::default()
        };
        assert!(run_checks(&cfg).is_err());
    }

    #[test]
    fn selection_runs_only_requested_checks() {
        let cfg = Config {
            only: Some(vec!["s4-classes".to_string(), "stirling-tables".to_string()]),
            max_weight: 2,
            trials: 5,
            ..Config::default()
        };
        let report = run_checks(&cfg).unwrap();
        assert_eq!(report.checks.len(), 2);
        assert!(report.all_ok());
    }
}
