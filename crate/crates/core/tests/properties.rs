use proptest::prelude::*;

use sortal::chain::Chain;
use sortal::examples::{coc_example, pcf_example, stlc_example};
use sortal::family::{Context, Renaming};
use sortal::sample::Sampler;
use sortal::signature::{parse_signature, Signature};
use sortal::subst::{from_term, naive_bind, to_term, Assignment, Engine};
use sortal::term::{count_terms, enumerate, height, infer, parse_term, print_term, rename, Term};

fn example(i: usize) -> Signature {
    match i % 3 {
        0 => stlc_example(),
        1 => pcf_example(),
        _ => coc_example(),
    }
}

/// A context and a term over it, drawn from `seed`.
fn sample_term(sig: &Signature, seed: u64) -> Option<(Context, Term)> {
    let mut s = Sampler::new(sig, seed);
    let ctx = s.context(0, 3);
    let sort = s.inhabited_sort(&ctx, 4)?;
    let t = s.term(&ctx, &sort, 4)?;
    Some((ctx, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identity_renaming_is_identity(which in 0usize..3, seed in any::<u64>()) {
        let sig = example(which);
        if let Some((ctx, t)) = sample_term(&sig, seed) {
            prop_assert_eq!(rename(&sig, &t, &Renaming::identity(&ctx)), t);
        }
    }

    #[test]
    fn renaming_composes(which in 0usize..3, seed in any::<u64>()) {
        let sig = example(which);
        let Some((ctx, t)) = sample_term(&sig, seed) else { return Ok(()) };
        let mut s = Sampler::new(&sig, seed ^ 1);
        let mid = s.covering_context(&ctx, 3);
        let last = s.covering_context(&mid, 3);
        let rho = s.renaming(&ctx, &mid).unwrap();
        let sigma = s.renaming(&mid, &last).unwrap();
        let both = rho.then(&sigma).unwrap();
        let stepwise = rename(&sig, &rename(&sig, &t, &rho), &sigma);
        prop_assert_eq!(rename(&sig, &t, &both), stepwise.clone());
        prop_assert_eq!(infer(&sig, &last, &stepwise).unwrap(), infer(&sig, &ctx, &t).unwrap());
    }

    #[test]
    fn printing_round_trips(which in 0usize..3, seed in any::<u64>()) {
        let sig = example(which);
        if let Some((ctx, t)) = sample_term(&sig, seed) {
            let text = print_term(&sig, &t);
            prop_assert_eq!(parse_term(&sig, &ctx, &text, None).unwrap().into_term(), t);
        }
    }

    #[test]
    fn nested_form_round_trips(which in 0usize..3, seed in any::<u64>()) {
        let sig = example(which);
        if let Some((_, t)) = sample_term(&sig, seed) {
            prop_assert_eq!(to_term(&from_term(&sig, &t)), Some(t));
        }
    }

    #[test]
    fn bind_agrees_with_naive(which in 0usize..3, seed in any::<u64>()) {
        let sig = example(which);
        let Some((ctx, t)) = sample_term(&sig, seed) else { return Ok(()) };
        let mut s = Sampler::new(&sig, seed ^ 2);
        let target = s.covering_context(&ctx, 3);
        if let Some(f) = s.assignment(&ctx, &target, 2) {
            prop_assert_eq!(Engine::new(&sig).bind(&f, &t).unwrap(), naive_bind(&sig, f.images(), &t));
        }
    }

    #[test]
    fn bind_with_identity_is_identity(which in 0usize..3, seed in any::<u64>()) {
        let sig = example(which);
        if let Some((ctx, t)) = sample_term(&sig, seed) {
            prop_assert_eq!(Engine::new(&sig).bind(&Assignment::identity(&ctx), &t).unwrap(), t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn enumeration_is_deterministic_sound_and_counted(which in 0usize..3, seed in any::<u64>(), n in 0usize..4) {
        let sig = example(which);
        let mut s = Sampler::new(&sig, seed);
        let ctx = s.context(0, 2);
        let sort = s.sort();
        if count_terms(&sig, &ctx, &sort, n) > 100_000 {
            return Ok(());
        }
        let terms = enumerate(&sig, &ctx, &sort, n).unwrap();
        prop_assert_eq!(&enumerate(&sig, &ctx, &sort, n).unwrap(), &terms);
        prop_assert_eq!(terms.len() as u128, count_terms(&sig, &ctx, &sort, n));
        for t in &terms {
            prop_assert!(height(t) <= n);
            prop_assert_eq!(&infer(&sig, &ctx, t).unwrap(), &sort);
        }
    }

    #[test]
    fn chain_levels_grow(which in 0usize..3, seed in any::<u64>()) {
        let sig = example(which);
        let mut s = Sampler::new(&sig, seed);
        let ctx = s.context(0, 2);
        let sort = s.sort();
        let mut chain = Chain::new(&sig);
        for n in 0..4 {
            let lower = chain.size(n, &ctx, &sort).unwrap();
            let upper = chain.size(n + 1, &ctx, &sort).unwrap();
            prop_assert!(lower <= upper);
        }
    }
}

#[test]
fn examples_round_trip_through_json() {
    for i in 0..3 {
        let sig = example(i);
        assert_eq!(parse_signature(&sig.to_json()).unwrap(), sig);
    }
}
