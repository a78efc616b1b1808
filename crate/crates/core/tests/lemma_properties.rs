//! Randomized property suites for maps between `H`-free modules at rank 1:
//! an injection on generator quotients lifts to an injection of modules,
//! and an injection of modules with reduced source quotient descends to an
//! injection of quotients.  Both run over seeded random populations of
//! small validated presentations, together with the nilpotence of
//! `Tor_1(F2, −)` across the whole catalog.

use umod_core::classify::{catalog, catalog_names};
use umod_core::functors::{induced_quotient_map, quotient_e, tor1_rank_one};
use umod_core::hv::Poly;
use umod_core::steenrod::FiniteAModule;
use umod_core::umod::{
    extend_from_module_generators, realize, validate, FreeElement, GradedMap, Presentation,
    Realized,
};

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

const TRUNC: u32 = 10;
const CERT: u32 = 5;

/// A random validated free-type presentation: rank 1, one or two
/// generators of degree ≤ 3, tables drawn uniformly from the degreewise
/// bases and filtered through the consistency checker.
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
        if validate(&pres, TRUNC).is_ok() {
            return pres;
        }
    }
}

fn random_vector(rng: &mut SplitMix64, dim: usize) -> umod_core::f2lin::F2Vec {
    let mut v = umod_core::f2lin::F2Vec::zeros(dim);
    for b in 0..dim {
        if rng.below(2) == 1 {
            v.set(b, true);
        }
    }
    v
}

/// A random `H`-A-linear map `p → q`, by drawing generator images until
/// the extension is consistent.  The zero assignment always extends, so
/// the draw terminates.
fn random_map(rng: &mut SplitMix64, p: &Realized, q: &Realized) -> GradedMap {
    loop {
        let images: Vec<_> =
            p.module_gens().iter().map(|&(d, _)| random_vector(rng, q.dim(d))).collect();
        if let Some(f) = extend_from_module_generators(p, q, &images) {
            return f;
        }
    }
}

/// A map `p → p` that is the identity on the generator quotient: each
/// generator goes to itself plus a random multiple of `t`.
fn quotient_identity_map(rng: &mut SplitMix64, p: &Realized) -> GradedMap {
    for _attempt in 0..32 {
        let images: Vec<_> = p
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
    let identity: Vec<_> = p.module_gens().iter().map(|(_, v)| v.clone()).collect();
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

#[test]
fn quotient_injections_lift_to_module_injections() {
    let mut rng = SplitMix64(0x5eed_0001);
    let mut fired = 0;
    for trial in 0..100 {
        let half = trial % 2 == 0;
        let p_pres = random_presentation(&mut rng);
        let p = realize(&p_pres, TRUNC);
        let (q, f) = if half {
            let f = quotient_identity_map(&mut rng, &p);
            (realize(&p_pres, TRUNC), f)
        } else {
            let q_pres = random_presentation(&mut rng);
            let q = realize(&q_pres, TRUNC);
            let f = random_map(&mut rng, &p, &q);
            (q, f)
        };
        assert!(f.is_ha_linear(&p, &q), "trial {trial}: extension must be H-A-linear");
        let induced = induced_quotient_map(&f, &p, &q);
        if injective_through(&induced, CERT) {
            fired += 1;
            assert!(
                injective_through(&f, CERT),
                "trial {trial}: injective quotient map with non-injective lift"
            );
        }
    }
    assert!(fired >= 40, "hypothesis fired only {fired} times of 100");
}

/// A free `H`-module on degree-0 generators — the only finitely generated
/// free-type shape whose generator quotient is reduced (a nonzero reduced
/// class in positive degree needs classes in its whole doubling orbit).
fn random_reduced_source(rng: &mut SplitMix64) -> Presentation {
    let gen_count = 1 + rng.below(2) as usize;
    let gens: Vec<(String, u32)> = (0..gen_count).map(|k| (format!("g{k}"), 0)).collect();
    Presentation::free(1, gens)
}

#[test]
fn injections_with_reduced_source_quotient_descend() {
    let mut rng = SplitMix64(0x5eed_0002);
    let mut fired = 0;
    for trial in 0..100 {
        let p_pres = if trial % 4 < 2 {
            random_reduced_source(&mut rng)
        } else {
            random_presentation(&mut rng)
        };
        let p = realize(&p_pres, TRUNC);
        let (q, f) = if trial % 2 == 0 {
            let f = quotient_identity_map(&mut rng, &p);
            (realize(&p_pres, TRUNC), f)
        } else {
            let q_pres = random_presentation(&mut rng);
            let q = realize(&q_pres, TRUNC);
            let f = random_map(&mut rng, &p, &q);
            (q, f)
        };
        let bar = quotient_e(&p);
        if injective_through(&f, TRUNC) && reduced_through(&bar, CERT) {
            fired += 1;
            let induced = induced_quotient_map(&f, &p, &q);
            assert!(
                injective_through(&induced, CERT),
                "trial {trial}: injection with reduced source quotient must descend"
            );
        }
    }
    assert!(fired >= 25, "hypothesis fired only {fired} times of 100");
}

#[test]
fn tor1_is_nilpotent_on_every_catalog_entry() {
    let mut entries: Vec<_> = catalog_names()
        .into_iter()
        .map(|name| catalog(name, &[], 12).unwrap())
        .collect();
    for (i, j) in [(3, 0), (2, 1), (1, 2), (0, 3)] {
        entries.push(catalog("rp2", &[i, j], 12).unwrap());
    }
    for entry in entries {
        let tor = tor1_rank_one(&realize(&entry.presentation, 12));
        assert_eq!(
            tor.nilpotent_witness(),
            None,
            "Tor_1 of `{}` must be nilpotent",
            entry.name
        );
    }
}
