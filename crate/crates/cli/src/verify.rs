//! The verification suites behind `umod verify`: eleven criteria, each an
//! exact check of one pillar of the engine — the Steenrod kernel, the
//! exhaustive classifications, the Smith reports, the fixed-point
//! identities, the randomized map lemmas, the predicate counterexamples,
//! the resolution checker, and the Euler-class models.  Every suite is
//! deterministic for a fixed seed and finishes at desk scale.

use umod_core::classify::{
    catalog, catalog_names, check_resolution, classify_f2_plus_sigma, classify_sigma_n,
    enumerate_sigma_n, gysin_model, search_j2, search_sigma_tables, solve_j2, J2Class,
};
use umod_core::f2lin::{F2Matrix, F2Vec};
use umod_core::functors::{
    fix_z2, induced_quotient_map, quotient_e, smith_sequence, tensor_with_hv, tor1_rank_one,
};
use umod_core::hv::{Character, LinearForm, Poly};
use umod_core::steenrod::{
    adem_normalize, binom_mod2, brown_gitler, free_unstable, AdemCache, FiniteAModule,
};
use umod_core::umod::{
    ensure_free_type, extend_from_module_generators, is_hfree, is_isomorphic_bounded, is_reduced,
    realize, reduced_quotient_dims, validate, FreeElement, GradedMap, IsoOutcome, Presentation,
    Realized,
};

const BUDGET: u64 = 1 << 22;

/// Result of one criterion: a pass flag plus deterministic detail lines.
pub struct CriterionOutcome {
    pub pass: bool,
    pub details: Vec<String>,
}

struct Check {
    pass: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { pass: true, details: Vec::new() }
    }

    fn assert(&mut self, condition: bool, label: &str) {
        if condition {
            self.details.push(format!("ok: {label}"));
        } else {
            self.pass = false;
            self.details.push(format!("FAILED: {label}"));
        }
    }

    fn note(&mut self, line: String) {
        self.details.push(line);
    }

    fn finish(self) -> CriterionOutcome {
        CriterionOutcome { pass: self.pass, details: self.details }
    }
}

/// Names of the criteria in order, ids 1 through 11.
pub fn criterion_names() -> Vec<&'static str> {
    vec![
        "steenrod-kernel",
        "cyclic-classes-rank1",
        "cyclic-classes-rank2",
        "two-generator-census",
        "smith-reports",
        "projective-plane",
        "fixed-points",
        "random-map-lemmas",
        "predicate-counterexamples",
        "resolution-and-pair",
        "euler-models",
    ]
}

/// Run one criterion by id (1-based).  `seed` feeds the randomized suites.
pub fn run_criterion(id: u32, seed: u64) -> CriterionOutcome {
    match id {
        1 => steenrod_kernel(seed),
        2 => cyclic_classes_rank1(),
        3 => cyclic_classes_rank2(),
        4 => two_generator_census(),
        5 => smith_reports(),
        6 => projective_plane(),
        7 => fixed_points(),
        8 => random_map_lemmas(seed),
        9 => predicate_counterexamples(),
        10 => resolution_and_pair(),
        11 => euler_models(),
        _ => CriterionOutcome {
            pass: false,
            details: vec![format!("unknown criterion id {id}")],
        },
    }
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn steenrod_kernel(seed: u64) -> CriterionOutcome {
    let mut check = Check::new();
    let mut rng = SplitMix64(seed ^ 0x5163_0001);
    let mut cache = AdemCache::new();
    let mut idempotent = true;
    let mut confluent = true;
    let mut admissible = true;
    for _ in 0..1000 {
        let len = 1 + rng.below(4) as usize;
        let mut word: Vec<u32> = Vec::with_capacity(len);
        let mut remaining = 12u64;
        for _ in 0..len {
            if remaining == 0 {
                break;
            }
            let s = 1 + rng.below(remaining.min(6));
            word.push(s as u32);
            remaining -= s;
        }
        let normal = adem_normalize(&[word.clone()]);
        let total: u32 = word.iter().sum();
        for m in normal.monomials() {
            if !m.is_admissible() || m.degree() != total {
                admissible = false;
            }
        }
        let re_expanded: Vec<Vec<u32>> =
            normal.monomials().map(|m| m.superscripts().to_vec()).collect();
        if adem_normalize(&re_expanded) != normal {
            idempotent = false;
        }
        for split in 1..word.len() {
            let left = adem_normalize(&[word[..split].to_vec()]);
            let right = adem_normalize(&[word[split..].to_vec()]);
            if left.mul(&right, &mut cache) != normal {
                confluent = false;
            }
        }
    }
    check.assert(admissible, "normal forms are admissible and degree-preserving (1000 products)");
    check.assert(idempotent, "normalization is idempotent (1000 products)");
    check.assert(confluent, "normalization is confluent across all split points");

    let f1 = free_unstable(1, 9);
    let dims: Vec<usize> = (0..=9).map(|d| f1.dim(d)).collect();
    check.note(format!("free module on a degree-1 class, dims 0..9: {dims:?}"));
    check.assert(
        dims == vec![0, 1, 1, 0, 1, 0, 0, 0, 1, 0],
        "free module on a degree-1 class is one-dimensional exactly in degrees 1, 2, 4, 8",
    );

    let j2 = brown_gitler(2, 9);
    check.assert(j2.dims()[..3] == [0, 1, 1] && j2.dims()[3..].iter().all(|&d| d == 0),
        "J(2) is one-dimensional exactly in degrees 1 and 2");
    let sq1 = j2.sq(1, 1);
    check.assert(
        sq1.rows() == 1 && sq1.cols() == 1 && !sq1.is_zero(),
        "Sq^1 is an isomorphism from degree 1 to degree 2 of J(2)",
    );
    check.finish()
}

fn cyclic_classes_rank1() -> CriterionOutcome {
    let mut check = Check::new();
    for n in 0..=3u32 {
        let census = match search_sigma_tables(n, 1, 12, BUDGET) {
            Ok(c) => c,
            Err(_) => {
                check.assert(false, "table search stayed within budget");
                return check.finish();
            }
        };
        check.note(format!(
            "degree {n}: {} tables, {} consistent, {} classes",
            census.total,
            census.valid.len(),
            census.classes.len()
        ));
        check.assert(
            census.valid.len() == n as usize + 1,
            &format!("degree {n}: exactly {} consistent tables", n + 1),
        );
        check.assert(
            census.classes.len() == n as usize + 1,
            &format!("degree {n}: exactly {} isomorphism classes", n + 1),
        );
        check.assert(
            enumerate_sigma_n(n, 1).len() == census.classes.len(),
            &format!("degree {n}: enumeration matches the census"),
        );
        for (rep, _) in &census.classes {
            match classify_sigma_n(rep, 12, BUDGET) {
                Ok(class) => {
                    let alpha = class.u_degree();
                    check.assert(
                        class.suspension + alpha == n
                            && class.factors.iter().all(|&(f, _)| f == LinearForm::new(1, 1)),
                        &format!(
                            "degree {n}: class d={} u=t^{alpha} classified with d+α=n",
                            class.suspension
                        ),
                    );
                }
                Err(e) => check.assert(false, &format!("degree {n}: classification failed: {e}")),
            }
        }
    }
    check.finish()
}

fn cyclic_classes_rank2() -> CriterionOutcome {
    let mut check = Check::new();
    let classes = enumerate_sigma_n(1, 2);
    check.assert(classes.len() == 4, "rank 2, degree 1: exactly 4 classes");
    let realized: Vec<(String, Realized)> = classes
        .iter()
        .map(|(class, pres)| (class.to_string(), realize(pres, 12)))
        .collect();
    for a in 0..realized.len() {
        for b in (a + 1)..realized.len() {
            let distinct = matches!(
                is_isomorphic_bounded(&realized[a].1, &realized[b].1, BUDGET),
                IsoOutcome::NotIsomorphic
            );
            check.assert(
                distinct,
                &format!("{} and {} are non-isomorphic", realized[a].0, realized[b].0),
            );
        }
    }
    for (class, pres) in &classes {
        match classify_sigma_n(pres, 12, BUDGET) {
            Ok(back) => check.assert(back == *class, &format!("{class} round-trips")),
            Err(e) => check.assert(false, &format!("{class} failed to classify: {e}")),
        }
    }
    check.finish()
}

fn two_generator_census() -> CriterionOutcome {
    let mut check = Check::new();
    let census = match search_j2(8, BUDGET) {
        Ok(c) => c,
        Err(_) => {
            check.assert(false, "the table search stayed within budget");
            return check.finish();
        }
    };
    check.note(format!(
        "{} tables, {} consistent, {} with the right quotient, {} classes",
        census.total_tables,
        census.valid_tables,
        census.candidates.len(),
        census.classes.len()
    ));
    check.assert(census.candidates.len() == 4, "exactly 4 candidate tables");
    check.assert(census.classes.len() == 2, "exactly 2 isomorphism classes");
    let mut sizes: Vec<u32> = census.classes.iter().map(|&(_, c)| c).collect();
    sizes.sort_unstable();
    check.assert(sizes == vec![2, 2], "both classes contain 2 tables");

    let mut labels = Vec::new();
    for (rep, _) in &census.classes {
        match solve_j2(rep, 8, BUDGET) {
            Ok(class) => labels.push(class),
            Err(e) => check.assert(false, &format!("class representative unresolved: {e}")),
        }
    }
    labels.sort_unstable();
    check.assert(
        labels == vec![J2Class::Tensor, J2Class::Exotic],
        "the classes are the tensor solution and the exotic solution",
    );

    // the fixed-point functor separates the two classes
    let mut fix_dims = Vec::new();
    for (rep, _) in &census.classes {
        let free = ensure_free_type(rep, 8).expect("census entries are H-free");
        let fix = fix_z2(&free, 4).expect("rank-1 free-type input");
        check.note(format!("fix dims: {:?} (total {})", fix.dims(), fix.total_dim()));
        check.assert(fix.total_dim() == 2, "fixed points are 2-dimensional in total");
        fix_dims.push(fix.dims().to_vec());
    }
    check.assert(
        fix_dims.len() == 2 && fix_dims[0] != fix_dims[1],
        "fixed-point dimensions distinguish the two classes",
    );
    let j2 = brown_gitler(2, 4);
    let split = FiniteAModule::concentrated(0, 4, "x")
        .direct_sum(&FiniteAModule::concentrated(1, 4, "y"));
    for (rep, _) in &census.classes {
        let free = ensure_free_type(rep, 8).unwrap();
        let fix = fix_z2(&free, 4).unwrap();
        let class = solve_j2(rep, 8, BUDGET).unwrap();
        let expected = match class {
            J2Class::Tensor => &j2,
            J2Class::Exotic => &split,
        };
        check.assert(
            fix.is_isomorphic(expected),
            &format!("fixed points of the {class} class match its model"),
        );
    }
    check.finish()
}

fn smith_reports() -> CriterionOutcome {
    let mut check = Check::new();
    let tensor = catalog("j2-tensor", &[], 16).unwrap().presentation;
    match smith_sequence(&tensor, 16, BUDGET) {
        Ok(report) => {
            check.assert(
                report.coker_dims.iter().all(|&d| d == 0),
                "tensor solution: the cokernel C vanishes",
            );
            check.assert(report.sequence_exact, "tensor solution: four-term sequence exact");
        }
        Err(e) => check.assert(false, &format!("tensor solution: {e}")),
    }
    let exotic = catalog("j2-exotic", &[], 16).unwrap().presentation;
    match smith_sequence(&exotic, 16, BUDGET) {
        Ok(report) => {
            check.note(format!(
                "exotic solution: coker {:?}, trivial part {:?}, report degree {}",
                &report.coker_dims[..4],
                &report.tau_dims[..4],
                report.report_degree
            ));
            check.assert(
                report.coker_dims[..3] == [1, 1, 0]
                    && report.coker_dims[3..].iter().all(|&d| d == 0),
                "exotic solution: C is the truncation of H to degrees ≤ 1",
            );
            check.assert(
                report.tau_dims[..3] == [0, 1, 0] && report.tau_dims[3..].iter().all(|&d| d == 0),
                "exotic solution: the trivial part of C is ΣF2",
            );
            check.assert(report.report_degree >= 8, "exactness certified through degree 8");
            check.assert(report.sequence_exact, "exotic solution: four-term sequence exact");
        }
        Err(e) => check.assert(false, &format!("exotic solution: {e}")),
    }
    check.finish()
}

fn projective_plane() -> CriterionOutcome {
    let mut check = Check::new();
    let expected = [
        ((3u32, 0u32), J2Class::Tensor),
        ((2, 1), J2Class::Exotic),
        ((1, 2), J2Class::Exotic),
    ];
    for trunc in [8u32, 16] {
        for ((i, j), class) in expected {
            let entry = catalog("rp2", &[i, j], trunc).unwrap();
            let e = realize(&entry.presentation, trunc);
            check.assert(
                is_hfree(&e).holds(),
                &format!("branch ({i},{j}) at degree {trunc}: H-free"),
            );
            check.assert(
                reduced_quotient_dims(&e).iter().sum::<usize>() == 2,
                &format!("branch ({i},{j}) at degree {trunc}: H-rank 2"),
            );
            check.assert(
                quotient_e(&e).is_isomorphic(&brown_gitler(2, trunc)),
                &format!("branch ({i},{j}) at degree {trunc}: quotient is J(2)"),
            );
            match solve_j2(&entry.presentation, trunc, BUDGET) {
                Ok(found) => check.assert(
                    found == class,
                    &format!("branch ({i},{j}) at degree {trunc}: class {class}"),
                ),
                Err(e) => {
                    check.assert(false, &format!("branch ({i},{j}) at degree {trunc}: {e}"))
                }
            }
        }
    }
    check.finish()
}

fn fixed_points() -> CriterionOutcome {
    let mut check = Check::new();
    let models: Vec<(&str, FiniteAModule)> = vec![
        ("F2", FiniteAModule::concentrated(0, 8, "x")),
        ("ΣF2", FiniteAModule::concentrated(1, 8, "x")),
        ("J(2)", brown_gitler(2, 8)),
    ];
    for (name, m) in &models {
        let pres = tensor_with_hv(m, 1);
        match fix_z2(&pres, 8) {
            Ok(fix) => check.assert(
                fix.is_isomorphic(m),
                &format!("fixed points of H ⊗ {name} recover {name}"),
            ),
            Err(e) => check.assert(false, &format!("H ⊗ {name}: {e}")),
        }
    }

    let mut sus = Presentation::free(1, vec![(String::from("g"), 2)]);
    sus.set_sq(0, 1, FreeElement::generator(1, 1, 0).mul_poly(&Poly::var(1, 1)));
    match fix_z2(&sus, 6) {
        Ok(fix) => check.assert(
            fix.is_isomorphic(&FiniteAModule::concentrated(1, 6, "s")),
            "fixed points of the suspended augmentation ideal are ΣF2",
        ),
        Err(e) => check.assert(false, &format!("suspended augmentation ideal: {e}")),
    }

    let mut entries: Vec<_> =
        catalog_names().into_iter().map(|name| catalog(name, &[], 8).unwrap()).collect();
    for (i, j) in [(3, 0), (2, 1), (1, 2), (0, 3)] {
        entries.push(catalog("rp2", &[i, j], 8).unwrap());
    }
    for entry in entries {
        let e = realize(&entry.presentation, 8);
        if !is_hfree(&e).holds() {
            check.note(format!("`{}` skipped (not H-free)", entry.name));
            continue;
        }
        let bar_total = quotient_e(&e).total_dim();
        let free = ensure_free_type(&entry.presentation, 8).unwrap();
        match fix_z2(&free, 8) {
            Ok(fix) => check.assert(
                fix.total_dim() == bar_total,
                &format!(
                    "`{}`: dim Fix = dim quotient = {bar_total}",
                    entry.name
                ),
            ),
            Err(e) => check.assert(false, &format!("`{}`: {e}", entry.name)),
        }
    }
    check.finish()
}

const LEMMA_TRUNC: u32 = 10;
const LEMMA_CERT: u32 = 5;

fn random_presentation(rng: &mut SplitMix64) -> Presentation {
    loop {
        let gen_count = 1 + rng.below(2) as usize;
        let gens: Vec<(String, u32)> =
            (0..gen_count).map(|k| (format!("g{k}"), rng.below(4) as u32)).collect();
        let mut pres = Presentation::free(1, gens.clone());
        for (k, &(_, dk)) in gens.iter().enumerate() {
            for i in 1..=dk {
                let mut e = FreeElement::zero(1, gen_count);
                for (j, &(_, dj)) in gens.iter().enumerate() {
                    if dk + i >= dj && rng.below(2) == 1 {
                        let p = Poly::var(1, 1).pow(dk + i - dj);
                        e = e.add(&FreeElement::generator(1, gen_count, j).mul_poly(&p));
                    }
                }
                if !e.is_zero() {
                    pres.set_sq(k, i, e);
                }
            }
        }
        if validate(&pres, LEMMA_TRUNC).is_ok() {
            return pres;
        }
    }
}

fn random_reduced_source(rng: &mut SplitMix64) -> Presentation {
    let gen_count = 1 + rng.below(2) as usize;
    Presentation::free(1, (0..gen_count).map(|k| (format!("g{k}"), 0)).collect())
}

fn random_vector(rng: &mut SplitMix64, dim: usize) -> F2Vec {
    let mut v = F2Vec::zeros(dim);
    for b in 0..dim {
        if rng.below(2) == 1 {
            v.set(b, true);
        }
    }
    v
}

fn random_map(rng: &mut SplitMix64, p: &Realized, q: &Realized) -> GradedMap {
    loop {
        let images: Vec<F2Vec> =
            p.module_gens().iter().map(|&(d, _)| random_vector(rng, q.dim(d))).collect();
        if let Some(f) = extend_from_module_generators(p, q, &images) {
            return f;
        }
    }
}

fn quotient_identity_map(rng: &mut SplitMix64, p: &Realized) -> GradedMap {
    for _ in 0..32 {
        let images: Vec<F2Vec> = p
            .module_gens()
            .iter()
            .map(|&(d, ref v)| {
                let mut img = v.clone();
                if d > 0 {
                    img.xor_assign(&p.t(1, d - 1).apply(&random_vector(rng, p.dim(d - 1))));
                }
                img
            })
            .collect();
        if let Some(f) = extend_from_module_generators(p, p, &images) {
            return f;
        }
    }
    let identity: Vec<F2Vec> = p.module_gens().iter().map(|(_, v)| v.clone()).collect();
    extend_from_module_generators(p, p, &identity).expect("the identity always extends")
}

fn injective_through(map: &GradedMap, limit: u32) -> bool {
    (0..=limit).all(|n| {
        let m = map.mat(n);
        m.rank() == m.rows()
    })
}

fn reduced_through(bar: &FiniteAModule, limit: u32) -> bool {
    (1..=limit).all(|n| {
        let m = bar.sq(n, n);
        m.rank() == m.rows()
    })
}

fn random_map_lemmas(seed: u64) -> CriterionOutcome {
    let mut check = Check::new();

    // an injection on generator quotients lifts to an injection
    let mut rng = SplitMix64(seed ^ 0x1e44_0001);
    let mut fired = 0;
    let mut lift_ok = true;
    for trial in 0..100 {
        let p_pres = random_presentation(&mut rng);
        let p = realize(&p_pres, LEMMA_TRUNC);
        let (q, f) = if trial % 2 == 0 {
            let f = quotient_identity_map(&mut rng, &p);
            (realize(&p_pres, LEMMA_TRUNC), f)
        } else {
            let q_pres = random_presentation(&mut rng);
            let q = realize(&q_pres, LEMMA_TRUNC);
            let f = random_map(&mut rng, &p, &q);
            (q, f)
        };
        let induced = induced_quotient_map(&f, &p, &q);
        if injective_through(&induced, LEMMA_CERT) {
            fired += 1;
            if !injective_through(&f, LEMMA_CERT) {
                lift_ok = false;
            }
        }
    }
    check.note(format!("lifting suite: hypothesis fired on {fired} of 100 instances"));
    check.assert(lift_ok, "quotient injections lift to module injections (100 instances)");
    check.assert(fired >= 40, "the lifting hypothesis fired often enough to be meaningful");

    // an injection with reduced source quotient descends to the quotients
    let mut rng = SplitMix64(seed ^ 0x1e44_0002);
    let mut fired = 0;
    let mut descend_ok = true;
    for trial in 0..100 {
        let p_pres = if trial % 4 < 2 {
            random_reduced_source(&mut rng)
        } else {
            random_presentation(&mut rng)
        };
        let p = realize(&p_pres, LEMMA_TRUNC);
        let (q, f) = if trial % 2 == 0 {
            let f = quotient_identity_map(&mut rng, &p);
            (realize(&p_pres, LEMMA_TRUNC), f)
        } else {
            let q_pres = random_presentation(&mut rng);
            let q = realize(&q_pres, LEMMA_TRUNC);
            let f = random_map(&mut rng, &p, &q);
            (q, f)
        };
        let bar = quotient_e(&p);
        if injective_through(&f, LEMMA_TRUNC) && reduced_through(&bar, LEMMA_CERT) {
            fired += 1;
            let induced = induced_quotient_map(&f, &p, &q);
            if !injective_through(&induced, LEMMA_CERT) {
                descend_ok = false;
            }
        }
    }
    check.note(format!("descent suite: hypothesis fired on {fired} of 100 instances"));
    check.assert(
        descend_ok,
        "injections with reduced source quotient descend to the quotients (100 instances)",
    );
    check.assert(fired >= 25, "the descent hypothesis fired often enough to be meaningful");

    // the first derived functor of the quotient is nilpotent on the catalog
    let mut entries: Vec<_> =
        catalog_names().into_iter().map(|name| catalog(name, &[], 12).unwrap()).collect();
    for (i, j) in [(3, 0), (2, 1), (1, 2), (0, 3)] {
        entries.push(catalog("rp2", &[i, j], 12).unwrap());
    }
    for entry in entries {
        let tor = tor1_rank_one(&realize(&entry.presentation, 12));
        check.assert(
            tor.nilpotent_witness().is_none(),
            &format!("tor1 of `{}` is nilpotent", entry.name),
        );
    }
    check.finish()
}

fn predicate_counterexamples() -> CriterionOutcome {
    let mut check = Check::new();
    let jv1 = catalog("jv1", &[], 12).unwrap().presentation;
    let e = realize(&jv1, 12);
    check.assert(!is_reduced(&e).holds(), "the truncated algebra H/(t²) is not reduced");
    let bar = quotient_e(&e);
    check.assert(
        bar.same_structure(&FiniteAModule::concentrated(0, 12, "i")),
        "its generator quotient is F2",
    );
    check.assert(
        reduced_through(&bar, 6),
        "and F2 is reduced — the quotient forgets the failure",
    );
    check.assert(!is_hfree(&e).holds(), "H/(t²) is not free over H");

    let pos = catalog("h-geq-1", &[], 12).unwrap().presentation;
    let e = realize(&pos, 12);
    check.assert(is_reduced(&e).holds(), "the positive-degree part of H is reduced");
    let bar = quotient_e(&e);
    check.assert(
        bar.same_structure(&FiniteAModule::concentrated(1, 12, "t")),
        "its generator quotient is ΣF2",
    );
    check.assert(
        bar.nilpotent_witness().is_none(),
        "and ΣF2 is nilpotent — the quotient invents a failure",
    );
    check.finish()
}

/// The polynomial algebra `F2[u]` with `|u| = 1` as a finite unstable
/// module through the truncation: `Sq^i(u^n) = C(n,i) u^{n+i}`.
fn polynomial_algebra_module(trunc: u32) -> FiniteAModule {
    let dims = vec![1usize; trunc as usize + 1];
    let labels = (0..=trunc).map(|n| vec![format!("u^{n}")]).collect();
    let mut m = FiniteAModule::with_dims(trunc, dims, labels);
    for n in 0..=trunc {
        for i in 1..=n.min(trunc - n) {
            if binom_mod2(n as i64, i as i64) {
                let mut mat = F2Matrix::zero(1, 1);
                mat.set(0, 0, true);
                m.set_sq(i, n, mat);
            }
        }
    }
    m
}

fn resolution_and_pair() -> CriterionOutcome {
    let mut check = Check::new();
    let a = catalog("bsu2-a", &[], 12).unwrap().presentation;
    let b = catalog("bsu2-b", &[], 12).unwrap().presentation;
    let ra = realize(&a, 12);
    let rb = realize(&b, 12);
    check.assert(is_hfree(&ra).holds(), "the untwisted symmetric-square family is H-free");
    check.assert(is_hfree(&rb).holds(), "the twisted symmetric-square family is H-free");
    let qa = quotient_e(&ra);
    let qb = quotient_e(&rb);
    check.assert(
        qa.is_isomorphic(&qb),
        "both have the same generator quotient (truncated polynomial algebra on a degree-4 class)",
    );
    check.assert(
        matches!(is_isomorphic_bounded(&ra, &rb, BUDGET), IsoOutcome::NotIsomorphic),
        "the two families are not isomorphic through degree 12",
    );

    // uniqueness for injective generator quotients: E ≅ H ⊗ Ē, checked by
    // the resolution checker with I1 = 0 and φ = 0
    let none = Presentation::free(1, Vec::new());
    for (name, bar) in [
        ("F2", FiniteAModule::concentrated(0, 8, "x")),
        ("the polynomial algebra F2[u]", polynomial_algebra_module(8)),
    ] {
        let e_pres = tensor_with_hv(&bar, 1);
        let i0 = e_pres.clone();
        let i0r = realize(&i0, 8);
        let phi = GradedMap::new((0..=8).map(|n| F2Matrix::zero(i0r.dim(n), 0)).collect());
        let qmap = GradedMap::new((0..=8).map(|n| F2Matrix::zero(bar.dim(n), 0)).collect());
        let verdict = check_resolution(&e_pres, &i0, &none, &phi, &qmap, 8, BUDGET);
        check.assert(
            verdict.holds(),
            &format!("uniqueness holds with injective quotient {name}"),
        );
    }

    // and the checker rejects a module that is not free on its quotient
    let th = catalog("tH", &[], 8).unwrap().presentation;
    let sigma_f2 = tensor_with_hv(&FiniteAModule::concentrated(1, 8, "x"), 1);
    let i0r = realize(&sigma_f2, 8);
    let phi = GradedMap::new((0..=8).map(|n| F2Matrix::zero(i0r.dim(n), 0)).collect());
    let qmap =
        GradedMap::new((0..=8).map(|n| F2Matrix::zero(usize::from(n == 1), 0)).collect());
    let verdict = check_resolution(&th, &sigma_f2, &none, &phi, &qmap, 8, BUDGET);
    check.assert(
        !verdict.holds(),
        "the checker rejects the augmentation ideal against H ⊗ ΣF2",
    );
    check.finish()
}

fn euler_models() -> CriterionOutcome {
    let mut check = Check::new();
    let sign = Character::new(1, 1);

    let entry = gysin_model(&[sign]);
    match classify_sigma_n(&entry.presentation, 8, BUDGET) {
        Ok(class) => check.assert(
            class.suspension == 0 && class.factors == vec![(LinearForm::new(1, 1), 1)],
            "the sign character gives the augmentation ideal t·H",
        ),
        Err(e) => check.assert(false, &format!("sign character: {e}")),
    }

    let entry = gysin_model(&[sign, Character::trivial(1)]);
    match classify_f2_plus_sigma(&entry.presentation, 10, BUDGET) {
        Ok(split) => check.assert(
            split.class.suspension == 1
                && split.class.factors == vec![(LinearForm::new(1, 1), 1)],
            "sign plus trivial gives the sphere model H ⊕ Σ(t·H)",
        ),
        Err(e) => check.assert(false, &format!("sign ⊕ trivial: {e}")),
    }

    let entry = gysin_model(&[Character::new(2, 1), Character::new(2, 2)]);
    match classify_sigma_n(&entry.presentation, 8, BUDGET) {
        Ok(class) => check.assert(
            class.suspension == 0
                && class.factors
                    == vec![(LinearForm::new(2, 1), 1), (LinearForm::new(2, 2), 1)],
            "the rank-2 coordinate characters give the ideal (t1·t2)·H",
        ),
        Err(e) => check.assert(false, &format!("(t1, t2): {e}")),
    }
    check.finish()
}
