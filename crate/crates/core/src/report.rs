//! JSON views of the analysis results. Maps are key-sorted, so output is
//! byte-stable for a given input.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::auxiliary::{AuxiliarySubstitution, BlockKind};
use crate::classify::{
    Census, DecompositionReport, LevelReport, LimitForm, MinimalSet, Orientation, PointSeed, SeedPair,
};
use crate::error::Error;
use crate::linalg::IntMatrix;
use crate::measures::{CylinderValue, Empirical, MeasureDescriptor, Uniformity};
use crate::spectral::{EigenPair, LimitData, SpectralProfile, Theta, Vector};
use crate::structure::ComponentChain;
use crate::words::{Substitution, Word};

pub fn float(x: f64) -> Value {
    if x.is_infinite() {
        json!("inf")
    } else {
        json!(x)
    }
}

fn rational(r: &BigRational) -> Value {
    json!(r.to_string())
}

fn letters(cs: &[char]) -> Value {
    json!(cs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn words(ws: &[Word]) -> Value {
    json!(ws.iter().map(|w| w.to_string()).collect::<Vec<_>>())
}

pub fn error(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "code": e.exit_code(), "message": e.to_string()}})
}

pub fn alphabet(sigma: &Substitution) -> Value {
    letters(sigma.alphabet().letters())
}

pub fn substitution(sigma: &Substitution) -> Value {
    let rules: serde_json::Map<String, Value> = sigma
        .alphabet()
        .letters()
        .iter()
        .map(|c| (c.to_string(), json!(sigma.image(*c).to_string())))
        .collect();
    Value::Object(rules)
}

pub fn chain(ch: &ComponentChain) -> Value {
    json!({
        "levels": (1..=ch.n()).map(|i| letters(ch.new_letters(i))).collect::<Vec<_>>(),
        "witness_k": ch.witness_k,
    })
}

pub fn matrix(m: &IntMatrix) -> Value {
    json!(m.to_rows())
}

pub fn auxiliary(aux: &AuxiliarySubstitution, m: &IntMatrix) -> Value {
    let blocks: Vec<Value> = aux
        .blocks
        .iter()
        .map(|b| {
            json!({
                "kind": if b.kind == BlockKind::Q { "Q" } else { "G" },
                "level": b.level,
                "words": words(aux.words_in(b.range.clone())),
            })
        })
        .collect();
    let images: Vec<Value> = aux
        .images
        .iter()
        .map(|img| json!(img.iter().map(|&j| aux.words[j].to_string()).collect::<Vec<_>>()))
        .collect();
    json!({
        "m": aux.m,
        "words": words(&aux.words),
        "blocks": blocks,
        "images": images,
        "matrix": matrix(m),
    })
}

fn theta(t: &Theta) -> Value {
    let (lo, hi) = t.value.interval();
    json!({
        "level": t.level,
        "float": t.float,
        "exact": t.value.exact().map(rational),
        "char_poly": t.char_poly.iter().map(|c| c.to_i64().map_or_else(|| json!(c.to_string()), |x| json!(x))).collect::<Vec<_>>(),
        "isolating_interval": [rational(lo), rational(hi)],
    })
}

pub fn spectral(sp: &SpectralProfile) -> Value {
    json!({
        "levels": sp.thetas.iter().map(theta).collect::<Vec<_>>(),
        "exact_eq_classes": sp.eq_classes(),
        "lambda": sp.lambda().float,
        "i_min": sp.i_min,
        "i_max": sp.i_max,
        "i_prime": sp.i_prime,
        "lambda_at": sp.lambda_at,
        "eta_at": sp.eta_at,
    })
}

fn vector(v: &Vector) -> Value {
    json!({
        "exact": v.exact.as_ref().map(|e| e.iter().map(rational).collect::<Vec<_>>()),
        "float": v.approx,
    })
}

pub fn eigen_pair(e: &EigenPair) -> Value {
    json!({"m": e.m, "words": words(&e.words), "lambda": e.lambda, "alpha": vector(&e.alpha), "beta": vector(&e.beta)})
}

pub fn limit(ld: &LimitData) -> Value {
    json!({
        "level": ld.level,
        "m": ld.m,
        "mode": format!("{:?}", ld.mode).to_lowercase(),
        "i_prime": ld.i_prime,
        "words": words(&ld.words),
        "infinite_words": words(&ld.infinite_words),
        "gamma": vector(&ld.gamma),
        "delta": vector(&ld.delta),
        "theta": ld.theta,
    })
}

pub fn seed_pair(p: &SeedPair) -> Value {
    json!({
        "a": p.a.to_string(),
        "b": p.b.to_string(),
        "k": p.k,
        "u": p.u.to_string(),
        "v": p.v.to_string(),
        "orientation": match p.orientation { Orientation::Forward => "forward", Orientation::Reverse => "reverse" },
    })
}

fn point_seed(s: &PointSeed) -> Value {
    match s {
        PointSeed::FixedLetterPower { letter } => {
            json!({"kind": "fixed_letter_power", "letter": letter.to_string(), "shift_periodic": true})
        }
        PointSeed::BilateralLimit { left, right, q, middle, form, window_periodic } => json!({
            "kind": "bilateral_limit",
            "left": left.to_string(),
            "right": right.to_string(),
            "q": q,
            "middle": middle.map(|(c, p)| json!({"letter": c.to_string(), "power": p})),
            "form": match form {
                LimitForm::Central => "central",
                LimitForm::LeftFixedPower => "left_fixed_power",
                LimitForm::RightFixedPower => "right_fixed_power",
            },
            "shift_periodic": false,
            "window_periodic": window_periodic,
        }),
        PointSeed::QuasiFixed { seed, primitive_type } => json!({
            "kind": "quasi_fixed",
            "seed": seed_pair(seed),
            "primitive_type": primitive_type,
            "shift_periodic": false,
        }),
    }
}

fn level(r: &LevelReport) -> Value {
    json!({
        "level": r.level,
        "case": r.case.tag(),
        "seed_pair": r.seed_pair.as_ref().map(seed_pair),
        "seeds": r.seeds.iter().map(point_seed).collect::<Vec<_>>(),
        "dense_part_nonempty": r.dense_part_nonempty,
        "positively_recurrent": r.positively_recurrent,
        "dedup_radius": r.dedup_radius,
        "x_sigma2_shift_periodic": r.shift_periodic_closure,
    })
}

fn census(c: &Census) -> Value {
    json!({
        "minimal_sets": c.minimal_sets.iter().map(|m| match m {
            MinimalSet::Bottom => json!("X_sigma1"),
            MinimalSet::SecondLevel => json!("X_sigma2"),
            MinimalSet::FixedPoint(s) => json!(format!("{s}^inf")),
        }).collect::<Vec<_>>(),
        "census_clause": c.clause,
        "unique_ergodicity": {"verdict": c.verdict.uniquely_ergodic, "clause": c.verdict.clause},
    })
}

pub fn classification(d: &DecompositionReport) -> Value {
    let mut v = census(&d.census);
    v["levels"] = json!(d.levels.iter().map(level).collect::<Vec<_>>());
    v
}

pub fn measure_descriptor(d: &MeasureDescriptor) -> Value {
    json!({
        "level": d.level,
        "type": d.kind.tag(),
        "anchor_letter": d.anchor.to_string(),
        "i_prime": d.i_prime,
        "orbits": d.orbits.iter().map(|o| json!({"seed": point_seed(&o.seed), "finite": o.finite})).collect::<Vec<_>>(),
    })
}

pub fn cylinder(c: &CylinderValue, anchor: char, level: usize) -> Value {
    let value = match (&c.exact, c.infinite) {
        (_, true) => json!("inf"),
        (Some(r), _) => rational(r),
        (None, _) => json!(c.approx),
    };
    json!({
        "level": level,
        "word": c.word.to_string(),
        "value": value,
        "float": float(c.approx),
        "infinite": c.infinite,
        "anchor_letter": anchor.to_string(),
    })
}

pub fn empirical(e: &Empirical) -> Value {
    json!({
        "anchor_letter": e.anchor.to_string(),
        "length": e.length,
        "power": e.power,
        "ratio": e.ratio,
        "scaled": e.scaled.map(|(k, x)| json!({"power": k, "value": x})),
    })
}

pub fn uniformity(u: &Uniformity) -> Value {
    json!({
        "target": u.target,
        "ratios": u.ratios.iter().map(|(j, r)| json!({"offset": j, "ratio": r})).collect::<Vec<_>>(),
        "max_deviation": u.max_deviation,
        "streamed": u.streamed,
    })
}
