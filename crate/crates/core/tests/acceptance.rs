//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use traitcast_core::channels::parse_channel_html_export;
use traitcast_core::classify::{
    cosine, mlp_gradients, mlp_loss, nearest_train_user, predict_nb, train_nb, MLPModel,
};
use traitcast_core::eval::pairwise_accuracy;
use traitcast_core::ingest::{clean_text, is_banned};
use traitcast_core::lexicon::{build_global_lexicon, compute_tf, compute_tfidf};
use traitcast_core::neo::{index_trait, score_neo, ITEM_COUNT};
use traitcast_core::pipeline::{self, RECOMMENDATIONS, REPORT, SYNTH_CONFIG, SYNTH_TRUTH};
use traitcast_core::recommend::{rank_channels, RecommendationLine};
use traitcast_core::{
    ChannelProfile, Config, EvalReport, MatchResult, NeoKey, NeoResponse, Profile, SyntheticSpec,
    TermCounts, TraitLabel, TraitVector, WeightVector,
};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Check {
    ensure!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
    Ok(String::new())
}

fn wv(id: &str, pairs: &[(String, f64)]) -> WeightVector {
    WeightVector::new(id, pairs.iter().cloned().collect())
}

fn profile(id: &str, weights: WeightVector) -> Profile {
    Profile::new(
        TermCounts::from_tokens(id, &["x"]),
        WeightVector {
            owner_id: id.into(),
            ..weights
        },
    )
}

fn random_vector(rng: &mut ChaCha8Rng, id: &str, vocab: usize) -> WeightVector {
    let n = rng.gen_range(1..=vocab);
    let pairs: Vec<(String, f64)> = (0..n)
        .map(|_| {
            (
                format!("t{}", rng.gen_range(0..vocab)),
                rng.gen_range(0.01..2.0),
            )
        })
        .collect();
    wv(id, &pairs)
}

// 1 ------------------------------------------------------------------------

fn pairwise_accuracy_arithmetic() -> Check {
    let pairs: Vec<MatchResult> = (0..16)
        .map(|i| MatchResult {
            test_id: format!("t{i}"),
            best_train_id: format!("u{i}"),
            similarity: 0.5,
            s_score: Some(if i < 13 { 4 } else { 3 }),
            predicted: None,
        })
        .collect();
    let start = Instant::now();
    let acc = pairwise_accuracy(&pairs).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(acc == 76.25, "got {acc}, expected 76.25");
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("16 pairs, sum 61 -> {acc} in {elapsed:?}"))
}

// 2 ------------------------------------------------------------------------

fn formula_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let words = ["الف", "ب", "پ", "ت", "ث", "ج", "چ", "ح"];
    let start = Instant::now();
    for case in 0..50 {
        let n_docs = rng.gen_range(1..=5);
        let docs: Vec<Vec<&str>> = (0..n_docs)
            .map(|_| {
                let len = rng.gen_range(1..=30);
                (0..len).map(|_| *words.choose(&mut rng).unwrap()).collect()
            })
            .collect();
        let counts: Vec<TermCounts> = docs
            .iter()
            .enumerate()
            .map(|(i, d)| TermCounts::from_tokens(&format!("d{i}"), d))
            .collect();
        let lex = build_global_lexicon(&counts).map_err(|e| e.to_string())?;

        for (doc, tc) in docs.iter().zip(&counts) {
            let tf = compute_tf(tc).map_err(|e| e.to_string())?;
            let tfidf = compute_tfidf(tc, &lex);
            for w in words {
                let occurrences = doc.iter().filter(|t| **t == w).count();
                let df = docs.iter().filter(|d| d.contains(&w)).count();
                let want_tf = occurrences as f64 / doc.len() as f64;
                let got_tf = tf.get(w).copied().unwrap_or(0.0);
                ensure!(
                    got_tf == want_tf,
                    "case {case}: tf({w}) = {got_tf}, oracle {want_tf}"
                );
                if df == 0 {
                    ensure!(lex.idf(w).is_none(), "case {case}: idf for absent term {w}");
                    continue;
                }
                let want_idf = (n_docs as f64 / df as f64).ln();
                ensure!(
                    lex.idf(w) == Some(want_idf),
                    "case {case}: idf({w}) = {:?}, oracle {want_idf}",
                    lex.idf(w)
                );
                let want = want_tf * want_idf;
                let got = tfidf.weights.get(w).copied().unwrap_or(0.0);
                ensure!(
                    got == want,
                    "case {case}: tfidf({w}) = {got}, oracle {want}"
                );
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("50 corpora exact in {:?}", start.elapsed()))
}

// 3 ------------------------------------------------------------------------

fn dense_cosine(a: &WeightVector, b: &WeightVector) -> f64 {
    let keys: BTreeSet<&String> = a.weights.keys().chain(b.weights.keys()).collect();
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for k in keys {
        let x = a.weights.get(k).copied().unwrap_or(0.0);
        let y = b.weights.get(k).copied().unwrap_or(0.0);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    dot / (na.sqrt() * nb.sqrt())
}

fn cosine_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let start = Instant::now();
    for case in 0..100 {
        let test = profile("test", random_vector(&mut rng, "test", 12));
        let n = rng.gen_range(1..=10);
        let mut ids: Vec<String> = (0..n).map(|i| format!("u{i:02}")).collect();
        ids.shuffle(&mut rng);
        let mut train: Vec<Profile> = ids
            .iter()
            .map(|id| profile(id, random_vector(&mut rng, id, 12)))
            .collect();
        if rng.gen_bool(0.3) {
            // duplicate a vector under another id to force a tie
            let mut twin = train[0].clone();
            twin.owner_id = "u99".into();
            twin.tfidf.owner_id = "u99".into();
            train.push(twin);
        }

        for cand in &train {
            let ab = cosine(&test.tfidf, &cand.tfidf).map_err(|e| e.to_string())?;
            let ba = cosine(&cand.tfidf, &test.tfidf).map_err(|e| e.to_string())?;
            ensure!(ab == ba, "case {case}: asymmetric {ab} vs {ba}");
            ensure!(
                (0.0..=1.0).contains(&ab),
                "case {case}: {ab} outside [0, 1]"
            );
            ensure!(
                (ab - dense_cosine(&test.tfidf, &cand.tfidf)).abs() < 1e-12,
                "case {case}: dense oracle differs"
            );
            let c = rng.gen_range(0.1..10.0);
            let scaled = cosine(&test.tfidf.scaled(c), &cand.tfidf).map_err(|e| e.to_string())?;
            ensure!(
                (scaled - ab).abs() < 1e-12,
                "case {case}: scaling by {c} moved {ab} to {scaled}"
            );
        }

        let mut by_id: Vec<&Profile> = train.iter().collect();
        by_id.sort_by(|a, b| a.owner_id.cmp(&b.owner_id));
        let mut best: Option<(&str, f64)> = None;
        for p in by_id {
            let s = cosine(&test.tfidf, &p.tfidf).unwrap();
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((&p.owner_id, s));
            }
        }
        let (want_id, want_sim) = best.unwrap();
        let got = nearest_train_user(&test, &train, 6.0).map_err(|e| e.to_string())?;
        ensure!(
            got.best_train_id == want_id && got.similarity == want_sim,
            "case {case}: matched {} ({}), brute force {want_id} ({want_sim})",
            got.best_train_id,
            got.similarity
        );
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("100 instances in {:?}", start.elapsed()))
}

// 4 ------------------------------------------------------------------------

fn nb_correctness() -> Check {
    use TraitLabel::*;
    let start = Instant::now();
    let x = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let m = train_nb(&x, &[Openness, Conscientiousness], 1.0).map_err(|e| e.to_string())?;
    let (label, post) = predict_nb(&m, &x[0]).map_err(|e| e.to_string())?;
    ensure!(label == Openness, "hand example predicted {label}");
    ensure!(
        (post[0] - 2.0 / 3.0).abs() < 1e-12 && (post[1] - 1.0 / 3.0).abs() < 1e-12,
        "hand example posterior {post:?}, expected (2/3, 1/3)"
    );
    ensure!(
        (m.log_likelihood[0][0].exp() - 2.0 / 3.0).abs() < 1e-15
            && (m.log_likelihood[0][1].exp() - 1.0 / 3.0).abs() < 1e-15,
        "hand example likelihoods {:?}",
        m.log_likelihood[0]
    );

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..100 {
        let cols = rng.gen_range(2..12);
        let rows = rng.gen_range(2..15);
        // sparse rows: most cells zero, so many class/column pairs are unseen
        let x: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            rng.gen_range(0.0..0.5)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let y: Vec<TraitLabel> = (0..rows)
            .map(|_| TraitLabel::ALL[rng.gen_range(0..5)])
            .collect();
        let alpha = [1.0, 0.1, 0.01][case % 3];
        let m = train_nb(&x, &y, alpha).map_err(|e| e.to_string())?;
        ensure!(
            m.log_likelihood.iter().flatten().all(|l| l.is_finite()),
            "case {case}: smoothing left a zero likelihood"
        );
        for row in &x {
            let (_, post) = predict_nb(&m, row).map_err(|e| e.to_string())?;
            let sum: f64 = post.iter().sum();
            ensure!(
                (sum - 1.0).abs() < 1e-9,
                "case {case}: posterior sums to {sum}"
            );
            for c in &m.classes {
                ensure!(
                    post[c.index()] > 0.0,
                    "case {case}: zero posterior for seen class {c}"
                );
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "hand example exact; 100 random models in {:?}",
        start.elapsed()
    ))
}

// 5 ------------------------------------------------------------------------

const FD_STEP: f64 = 1e-5;
/// Below this magnitude a gradient is compared absolutely: rounding in the
/// difference quotient is about `eps * loss / step`, roughly 1e-11.
const FD_FLOOR: f64 = 1e-6;
const KINK_MARGIN: f64 = 1e-3;

fn near_kink(m: &MLPModel, x: &[Vec<f64>]) -> bool {
    let n_in = m.input_size();
    x.iter().any(|row| {
        (0..m.hidden_size).any(|h| {
            let pre = m.b1[h]
                + m.w1[h * n_in..(h + 1) * n_in]
                    .iter()
                    .zip(row)
                    .map(|(w, v)| w * v)
                    .sum::<f64>();
            pre.abs() < KINK_MARGIN
        })
    })
}

fn mlp_gradient_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    let mut resampled = 0usize;
    while checked < 10 {
        let n_in = rng.gen_range(2..=6);
        let hidden = rng.gen_range(2..=5);
        let rows = rng.gen_range(2..=6);
        let x: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..n_in).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<TraitLabel> = (0..rows)
            .map(|_| TraitLabel::ALL[rng.gen_range(0..5)])
            .collect();
        let mut m = MLPModel::init(n_in, hidden, rng.gen());
        for b in m.b1.iter_mut().chain(m.b2.iter_mut()) {
            *b = rng.gen_range(-0.5..0.5);
        }
        if near_kink(&m, &x) {
            resampled += 1;
            continue;
        }
        let analytic = mlp_gradients(&m, &x, &y).map_err(|e| e.to_string())?;
        let grads: Vec<Vec<f64>> = analytic.parts().iter().map(|p| p.to_vec()).collect();
        for (part, g) in grads.iter().enumerate() {
            for (i, &a) in g.iter().enumerate() {
                let orig = m.parts_mut()[part][i];
                m.parts_mut()[part][i] = orig + FD_STEP;
                let up = mlp_loss(&m, &x, &y).unwrap();
                m.parts_mut()[part][i] = orig - FD_STEP;
                let down = mlp_loss(&m, &x, &y).unwrap();
                m.parts_mut()[part][i] = orig;
                let numeric = (up - down) / (2.0 * FD_STEP);
                let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(FD_FLOOR);
                worst = worst.max(rel);
                ensure!(
                    rel <= 1e-4,
                    "instance {checked}: part {part} index {i} analytic {a} numeric {numeric}"
                );
            }
        }
        checked += 1;
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "10 instances ({resampled} resampled near a kink), max rel err {worst:.2e}"
    ))
}

// 6-8: full pipeline on the canonical fixture ------------------------------

struct Run {
    dir: tempfile::TempDir,
    elapsed: Duration,
}

fn run_canonical() -> std::result::Result<Run, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let seed_cfg = Config {
        output_dir: dir.path().to_path_buf(),
        ..Config::default()
    };
    pipeline::synth(&seed_cfg, &SyntheticSpec::canonical()).map_err(|e| e.to_string())?;
    let cfg = Config::load(&dir.path().join(SYNTH_CONFIG)).map_err(|e| e.to_string())?;
    pipeline::run_all(&cfg).map_err(|e| e.to_string())?;
    Ok(Run {
        dir,
        elapsed: start.elapsed(),
    })
}

fn synthetic_end_to_end(run: &Run) -> Check {
    let report: EvalReport = serde_json::from_reader(
        File::open(run.dir.path().join(REPORT)).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let (c, n, m) = (
        report.cosine_accuracy_pct,
        report.nb_accuracy_pct,
        report.mlp_accuracy_pct,
    );
    ensure!(c >= 75.0, "cosine {c:.2} < 75");
    ensure!(n >= 80.0, "naive Bayes {n:.2} < 80");
    ensure!(m >= 75.0, "MLP {m:.2} < 75");
    within(run.elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "cosine {c:.2}, bayes {n:.2}, mlp {m:.2} in {:?}",
        run.elapsed
    ))
}

fn recommender(run: &Run) -> Check {
    let start = Instant::now();
    #[derive(serde::Deserialize)]
    struct Truth {
        users: BTreeMap<String, TraitLabel>,
    }
    let truth: Truth =
        serde_json::from_reader(File::open(run.dir.path().join(SYNTH_TRUTH)).unwrap())
            .map_err(|e| e.to_string())?;
    let text =
        fs::read_to_string(run.dir.path().join(RECOMMENDATIONS)).map_err(|e| e.to_string())?;
    let mut hits = 0;
    let mut total = 0;
    for line in text.lines() {
        let rec: RecommendationLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let planted = truth
            .users
            .get(&rec.user_id)
            .ok_or(format!("no truth for {}", rec.user_id))?;
        total += 1;
        let want = format!("channel_{}", planted.as_str().to_lowercase());
        if rec.recommendations.first().map(|s| s.channel_id.as_str()) == Some(want.as_str()) {
            hits += 1;
        }
    }
    ensure!(
        total == truth.users.len(),
        "{total} recommendation lines for {} users",
        truth.users.len()
    );
    let rate = 100.0 * hits as f64 / total as f64;
    ensure!(
        rate >= 90.0,
        "top-1 matches planted trait for {rate:.1}% of users"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..200 {
        let user = profile("user", random_vector(&mut rng, "user", 10));
        let n = rng.gen_range(1..=10);
        let channels: Vec<ChannelProfile> = (0..n)
            .map(|i| {
                let id = format!("c{i}");
                ChannelProfile::from_profile(profile(&id, random_vector(&mut rng, &id, 10)))
            })
            .collect();
        let k = rng.gen_range(1..=12);
        let got = rank_channels(&user, &channels, k, false).map_err(|e| e.to_string())?;
        let mut brute: Vec<(String, f64)> = channels
            .iter()
            .map(|c| (c.channel_id.clone(), cosine(&user.tfidf, &c.tfidf).unwrap()))
            .collect();
        brute.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        brute.truncate(k);
        let got: Vec<(String, f64)> = got
            .ranked
            .into_iter()
            .map(|s| (s.channel_id, s.score))
            .collect();
        ensure!(
            got == brute,
            "case {case}: ranking {got:?} != brute force {brute:?}"
        );
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "top-1 planted match {rate:.1}% ({hits}/{total}); 200 rankings equal brute force"
    ))
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn determinism(first: &Run) -> Check {
    let second = run_canonical()?;
    let (a, b) = (snapshot(first.dir.path()), snapshot(second.dir.path()));
    ensure!(
        a.keys().eq(b.keys()),
        "file sets differ: {:?} vs {:?}",
        a.keys(),
        b.keys()
    );
    for (name, bytes) in &a {
        ensure!(*bytes == b[name], "{name} differs between runs");
    }
    for required in [
        "store.jsonl",
        "lexicon.json",
        "nb_model.json",
        "mlp_model.json",
        RECOMMENDATIONS,
        REPORT,
    ] {
        ensure!(a.contains_key(required), "{required} was not written");
    }
    Ok(format!(
        "{} output files byte-identical across two runs",
        a.len()
    ))
}

// 9 ------------------------------------------------------------------------

fn random_unicode(rng: &mut ChaCha8Rng) -> String {
    const POOLS: &[(u32, u32)] = &[
        (0x20, 0x7e),     // ASCII printable
        (0x600, 0x6ff),   // Arabic block: Persian letters, digits, marks
        (0x64b, 0x652),   // harakat
        (0x2000, 0x206f), // general punctuation, ZWNJ
        (0x300, 0x36f),   // combining marks
        (0xfb50, 0xfdff), // Arabic presentation forms
        (0xa0, 0x24f),    // Latin-1 and extended
        (0x212a, 0x212b), // Kelvin and Angstrom signs
        (0x1f600, 0x1f64f),
    ];
    let len = rng.gen_range(0..40);
    (0..len)
        .filter_map(|_| {
            let (lo, hi) = POOLS[rng.gen_range(0..POOLS.len())];
            char::from_u32(rng.gen_range(lo..=hi))
        })
        .collect()
}

fn cleaning_and_parsing() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..1000 {
        let s = random_unicode(&mut rng);
        let once = clean_text(&s);
        ensure!(
            !once.chars().any(is_banned),
            "case {case}: banned character survives in {once:?}"
        );
        ensure!(
            clean_text(&once) == once,
            "case {case}: not idempotent on {s:?}"
        );
    }
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/channel_export.html");
    let posts = parse_channel_html_export(File::open(path).map_err(|e| e.to_string())?, "sample")
        .map_err(|e| e.to_string())?;
    let texts: Vec<&str> = posts.iter().map(|p| p.text.as_str()).collect();
    let want = ["سلام دنیا", "a c d e", "کتاب\u{200c}های خوب را بخوانید!"];
    ensure!(texts == want, "fixture parsed to {texts:?}");
    Ok("1000 random strings clean and idempotent; fixture exact".into())
}

// 10 -----------------------------------------------------------------------

fn neo_scoring() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let shipped: NeoKey = serde_json::from_str(include_str!("../../../data/neo_key.json"))
        .map_err(|e| e.to_string())?;
    for case in 0..1000 {
        let key = if case % 2 == 0 {
            shipped.clone()
        } else {
            let mut traits: Vec<TraitLabel> =
                (0..ITEM_COUNT).map(|i| TraitLabel::ALL[i % 5]).collect();
            traits.shuffle(&mut rng);
            NeoKey {
                item_trait: traits,
                reversed: (0..ITEM_COUNT).map(|_| rng.gen_bool(0.4)).collect(),
            }
        };
        let resp = NeoResponse {
            respondent_id: format!("r{case}"),
            answers: (0..ITEM_COUNT).map(|_| rng.gen_range(1..=5)).collect(),
        };
        let tv = score_neo(&resp, &key).map_err(|e| e.to_string())?;
        let effective: u32 = resp
            .answers
            .iter()
            .enumerate()
            .map(|(i, a)| u32::from(key.effective(i, *a)))
            .sum();
        ensure!(
            tv.0.iter().sum::<f64>() == f64::from(effective),
            "case {case}: scores do not conserve item total"
        );
        ensure!(
            tv.0.iter().all(|s| (12.0..=60.0).contains(s)),
            "case {case}: score outside [12, 60]: {:?}",
            tv.0
        );
    }
    let row = index_trait(&TraitVector([39.0, 29.0, 40.0, 46.0, 51.0]));
    ensure!(row == TraitLabel::Neuroticism, "(39,29,40,46,51) -> {row}");
    Ok("1000 responses conserve and stay in [12, 60]; (39,29,40,46,51) -> Neuroticism".into())
}

fn main() {
    let mut failures = 0;
    let mut report = |n: usize, name: &str, result: Check| match result {
        Ok(detail) => println!("PASS  {n:>2}. {name}: {detail}"),
        Err(why) => {
            failures += 1;
            println!("FAIL  {n:>2}. {name}: {why}");
        }
    };
    report(1, "pairwise accuracy arithmetic", pairwise_accuracy_arithmetic());
    report(2, "tf / idf / tf-idf oracles", formula_oracles());
    report(3, "cosine properties and nearest user", cosine_properties());
    report(4, "naive Bayes correctness", nb_correctness());
    report(5, "MLP gradient check", mlp_gradient_check());
    match run_canonical() {
        Ok(run) => {
            report(
                6,
                "synthetic end-to-end accuracy",
                synthetic_end_to_end(&run),
            );
            report(7, "recommender correctness", recommender(&run));
            report(8, "determinism", determinism(&run));
        }
        Err(e) => {
            for (n, name) in [
                (6, "synthetic end-to-end accuracy"),
                (7, "recommender correctness"),
                (8, "determinism"),
            ] {
                report(n, name, Err(format!("pipeline failed: {e}")));
            }
        }
    }
    report(9, "cleaning and HTML parsing", cleaning_and_parsing());
    report(10, "NEO scoring", neo_scoring());
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
