//! Randomized property checks for the algebraic core and the file formats.

use proptest::prelude::*;

use pgcache::gf::{all_vectors, make_field, Subspace};
use pgcache::pda::{load_pda, save_pda, validate_pda, Entry, Pda};
use pgcache::projective::{gaussian_binomial, theta};
use pgcache::scheme::scheme_params;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

proptest! {
    /// Field axioms on random element pairs/triples for a few orders.
    #[test]
    fn field_axioms_random(qi in 0usize..6, a in 0u32..16, b in 0u32..16, c in 0u32..16) {
        let q = [2u64, 3, 4, 5, 8, 9][qi];
        let f = make_field(q).unwrap();
        let a = a % q as u32;
        let b = b % q as u32;
        let c = c % q as u32;
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    /// dim(A + B) <= dim A + dim B, and the sum contains both summands.
    #[test]
    fn subspace_sum_dimension(seed in 0u64..500) {
        let f = make_field(2).unwrap();
        let k = 4usize;
        let vectors = all_vectors(&f, k);
        let pick = |s: u64, n: usize| {
            (0..n).map(|i| vectors[((s >> (i * 4)) & 15) as usize].clone()).collect::<Vec<_>>()
        };
        let a = Subspace::span(&f, &pick(seed, 2), k).unwrap();
        let b = Subspace::span(&f, &pick(seed.rotate_left(17), 2), k).unwrap();
        let s = a.sum(&f, &b).unwrap();
        prop_assert!(s.dim() <= a.dim() + b.dim());
        prop_assert!(s.contains_subspace(&f, &a).unwrap());
        prop_assert!(s.contains_subspace(&f, &b).unwrap());
    }

    /// Pascal-style recurrence of the q-binomial.
    #[test]
    fn gaussian_binomial_recurrence(q in prop::sample::select(vec![2u64, 3, 4, 5]),
                                    k in 1u32..12, m in 1u32..12) {
        prop_assume!(m <= k);
        let lhs = gaussian_binomial(k, m, q).unwrap();
        let rhs = if m == k {
            gaussian_binomial(k - 1, m - 1, q).unwrap()
        } else {
            gaussian_binomial(k - 1, m - 1, q).unwrap()
                + BigUint::from(q).pow(m) * gaussian_binomial(k - 1, m, q).unwrap()
        };
        prop_assert_eq!(lhs, rhs);
        // Column symmetry.
        prop_assert_eq!(
            gaussian_binomial(k, m, q).unwrap(),
            gaussian_binomial(k, k - m, q).unwrap()
        );
    }

    /// theta telescopes: theta(k) = q^{k-1} + theta(k-1).
    #[test]
    fn theta_recurrence(q in prop::sample::select(vec![2u64, 3, 4, 5, 7]), k in 1u32..20) {
        prop_assert_eq!(
            theta(k, q),
            BigUint::from(q).pow(k - 1) + theta(k - 1, q)
        );
    }

    /// Scheme identities hold across a random slice of the parameter space:
    /// K*D = F*c, Z = F - D, S*d = K*D, gain = K(1 - M/N)/R.
    #[test]
    fn scheme_identities(q in prop::sample::select(vec![2u64, 3, 4, 5]),
                         k in 4u32..10, m in 1u32..6, t in 1u32..6) {
        prop_assume!(m + t + 2 <= k);
        let p = scheme_params(q, k, m, t).unwrap();
        prop_assert_eq!(&p.users * &p.user_clique, &p.subpacketization * &p.subfile_clique);
        prop_assert_eq!(&p.stars_per_column + &p.user_clique, p.subpacketization.clone());
        prop_assert_eq!(
            &p.transmissions * BigUint::from(p.gain),
            &p.users * &p.user_clique
        );
    }

    /// CSV round trip is the identity for arbitrary arrays, valid or not.
    #[test]
    fn pda_csv_round_trip(rows in prop::collection::vec(
        prop::collection::vec(prop::option::of(1u32..40), 5), 4)) {
        let entries: Vec<Vec<Entry>> = rows
            .iter()
            .map(|r| r.iter().map(|c| match c {
                None => Entry::Star,
                Some(v) => Entry::Int(*v),
            }).collect())
            .collect();
        let pda = Pda::new(5, 4, entries).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        save_pda(&pda, &path).unwrap();
        let loaded = load_pda(&path).unwrap();
        prop_assert_eq!(loaded.entries, pda.entries);
    }
}

/// Star-count consistency: Z/F of the built PDA equals M/N of the closed
/// forms for the feasible small instances.
#[test]
fn star_fraction_matches_cache_fraction() {
    use pgcache::linegraph::{build_geometry, build_line_graph, transmission_cover};
    use pgcache::pda::line_graph_to_pda;
    for (q, k, m, t) in [(2u64, 4u32, 1u32, 1u32), (2, 5, 1, 2), (2, 6, 1, 3)] {
        let ctx = build_geometry(q, k, m, t).unwrap();
        let graph = build_line_graph(&ctx);
        let cover = transmission_cover(&ctx, &graph).unwrap();
        let pda = line_graph_to_pda(&graph, &cover).unwrap();
        let report = validate_pda(&pda);
        let p = scheme_params(q, k, m, t).unwrap();
        assert_eq!(
            report.stars_per_column.unwrap(),
            p.stars_per_column.to_usize().unwrap()
        );
        assert_eq!(report.labels, p.transmissions.to_usize().unwrap());
        assert_eq!(report.regularity, Some(p.gain as usize));
    }
}
