use std::collections::BTreeMap;

use proptest::prelude::*;

use traitcast_core::classify::{cosine, predict_nb, split_train_test, train_nb};
use traitcast_core::eval::satisfaction_rate;
use traitcast_core::lexicon::{build_global_lexicon, build_trait_lexicon, compute_tf};
use traitcast_core::recommend::rank_channels;
use traitcast_core::{
    ChannelProfile, FeedbackRecord, Profile, TermCounts, TraitLabel, WeightVector,
};

fn weights() -> impl Strategy<Value = BTreeMap<String, f64>> {
    prop::collection::btree_map("[a-h]", 0.001f64..5.0, 1..8)
}

fn trait_label() -> impl Strategy<Value = TraitLabel> {
    (0usize..5).prop_map(|i| TraitLabel::ALL[i])
}

fn docs() -> impl Strategy<Value = Vec<Vec<String>>> {
    prop::collection::vec(prop::collection::vec("[a-f]", 1..20), 1..6)
}

fn profile(id: &str, w: BTreeMap<String, f64>) -> Profile {
    Profile::new(
        TermCounts::from_tokens(id, &["x"]),
        WeightVector::new(id, w),
    )
}

proptest! {
    #[test]
    fn cosine_symmetric_bounded_scale_free(a in weights(), b in weights(), c in 0.01f64..100.0) {
        let (a, b) = (WeightVector::new("a", a), WeightVector::new("b", b));
        let ab = cosine(&a, &b).unwrap();
        prop_assert_eq!(ab, cosine(&b, &a).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((cosine(&a.scaled(c), &b).unwrap() - ab).abs() < 1e-12);
        prop_assert_eq!(cosine(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn tf_sums_to_one(tokens in prop::collection::vec("[a-f]", 1..50)) {
        let tf = compute_tf(&TermCounts::from_tokens("u", &tokens)).unwrap();
        prop_assert!((tf.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn idf_within_bounds(docs in docs()) {
        let counts: Vec<TermCounts> =
            docs.iter().enumerate().map(|(i, d)| TermCounts::from_tokens(&i.to_string(), d)).collect();
        let lex = build_global_lexicon(&counts).unwrap();
        let max = (docs.len() as f64).ln();
        for (term, idf) in lex.idf_table() {
            prop_assert!(*idf >= 0.0 && *idf <= max + 1e-12, "{} -> {}", term, idf);
            let everywhere = docs.iter().all(|d| d.contains(term));
            prop_assert_eq!(*idf == 0.0, everywhere);
        }
    }

    #[test]
    fn trait_lexicon_ignores_input_order(
        rows in prop::collection::vec((trait_label(), weights()), 1..10),
        seed in any::<u64>(),
    ) {
        let vectors: Vec<(TraitLabel, WeightVector)> =
            rows.into_iter().enumerate().map(|(i, (t, w))| (t, WeightVector::new(i.to_string(), w))).collect();
        let mut shuffled = vectors.clone();
        // deterministic rotation plus reversal stands in for a shuffle
        let k = (seed as usize) % shuffled.len();
        shuffled.rotate_left(k);
        if seed % 2 == 0 {
            shuffled.reverse();
        }
        let a = build_trait_lexicon(vectors.iter().map(|(t, w)| (*t, w)));
        let b = build_trait_lexicon(shuffled.iter().map(|(t, w)| (*t, w)));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ranking_is_scale_invariant(
        user in weights(),
        chans in prop::collection::vec(weights(), 1..8),
        c in 0.01f64..100.0,
        k in 1usize..6,
    ) {
        let channels: Vec<ChannelProfile> = chans
            .into_iter()
            .enumerate()
            .map(|(i, w)| ChannelProfile::from_profile(profile(&format!("c{i}"), w)))
            .collect();
        let u = profile("u", user);
        let mut scaled = u.clone();
        scaled.tfidf = u.tfidf.scaled(c);
        let a = rank_channels(&u, &channels, k, false).unwrap();
        let b = rank_channels(&scaled, &channels, k, false).unwrap();
        let ids = |r: &traitcast_core::Recommendation| r.ranked.iter().map(|s| s.channel_id.clone()).collect::<Vec<_>>();
        // scores may differ in the last ulp, which can reorder exact ties only
        for (x, y) in a.ranked.iter().zip(&b.ranked) {
            prop_assert!((x.score - y.score).abs() < 1e-12);
        }
        if a.ranked.windows(2).all(|w| (w[0].score - w[1].score).abs() > 1e-9) {
            prop_assert_eq!(ids(&a), ids(&b));
        }
        prop_assert_eq!(a.ranked.len(), k.min(channels.len()));
    }

    #[test]
    fn nb_posteriors_are_distributions(
        rows in prop::collection::vec((prop::collection::vec(0.0f64..1.0, 4), trait_label()), 2..12),
        alpha in prop::sample::select(vec![1.0, 0.1, 0.01]),
    ) {
        let (x, y): (Vec<Vec<f64>>, Vec<TraitLabel>) = rows.into_iter().unzip();
        let m = train_nb(&x, &y, alpha).unwrap();
        for row in &x {
            let (label, post) = predict_nb(&m, row).unwrap();
            prop_assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(post.iter().all(|p| *p <= post[label.index()] + 1e-12));
        }
    }

    #[test]
    fn split_partitions_rows(n in 3usize..200, frac in 0.01f64..0.99, seed in any::<u64>()) {
        let plan = split_train_test(n, frac, seed).unwrap();
        prop_assert_eq!(&plan, &split_train_test(n, frac, seed).unwrap());
        let mut all: Vec<usize> = plan.test_rows.iter().chain(&plan.train_rows).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert!(!plan.test_rows.is_empty() && !plan.train_rows.is_empty());
    }

    #[test]
    fn satisfaction_ignores_order(
        mut records in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 1..6), 1..8),
        rot in any::<usize>(),
    ) {
        let build = |rs: &[Vec<f64>]| -> Vec<FeedbackRecord> {
            rs.iter().enumerate().map(|(i, r)| FeedbackRecord { user_id: format!("u{i}"), ratings: r.clone() }).collect()
        };
        let a = satisfaction_rate(&build(&records)).unwrap();
        let n = records.len();
        records.rotate_left(rot % n);
        for r in records.iter_mut() {
            r.reverse();
        }
        let b = satisfaction_rate(&build(&records)).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=100.0).contains(&a));
    }
}
