//! DEA properties shared by the proptest suite and the acceptance runner.
//! Each check returns a description of the first violation.

use frontier::dataset::{Dataset, Dmu};
use frontier::envelopment::{radial_efficiency, reference_sets, GroupScenario, RtsAssumption};
use frontier::lp::SolverTolerances;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{random_dataset, random_dmu};

pub type Check = Result<(), String>;

/// Raw radial scores aligned with dataset rows.
pub fn thetas(ds: &Dataset, scenario: GroupScenario, rts: RtsAssumption) -> Vec<f64> {
    let tol = SolverTolerances::default();
    let mut out = vec![f64::NAN; ds.len()];
    for members in reference_sets(ds, scenario) {
        let reference = ds.subset(&members).unwrap();
        for (t, &row) in members.iter().enumerate() {
            out[row] = radial_efficiency(&reference, t, rts, &tol).unwrap().theta;
        }
    }
    out
}

/// A dataset within the property-suite envelope: N <= 3, M <= 4, K <= 40.
pub fn property_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=4);
    let groups = rng.random_range(1..=3);
    let k = rng.random_range(groups.max(2)..=40);
    random_dataset(rng, n, m, k, groups)
}

const SCENARIOS: [GroupScenario; 2] = [GroupScenario::PerGroup, GroupScenario::Merged];

pub fn crs_not_above_vrs(ds: &Dataset) -> Check {
    for scenario in SCENARIOS {
        let crs = thetas(ds, scenario, RtsAssumption::Crs);
        let vrs = thetas(ds, scenario, RtsAssumption::Vrs);
        for (k, (c, v)) in crs.iter().zip(&vrs).enumerate() {
            if *c > v + 1e-9 {
                return Err(format!("{scenario:?} row {k}: theta_crs {c} > theta_vrs {v}"));
            }
        }
    }
    Ok(())
}

fn rescale(ds: &Dataset, input_factors: &[f64], output_factors: &[f64]) -> Dataset {
    let dmus = ds
        .dmus()
        .iter()
        .map(|d| Dmu {
            id: d.id.clone(),
            group: d.group.clone(),
            inputs: d.inputs.iter().zip(input_factors).map(|(v, c)| v * c).collect(),
            outputs: d.outputs.iter().zip(output_factors).map(|(v, c)| v * c).collect(),
        })
        .collect();
    Dataset::new(ds.input_names().to_vec(), ds.output_names().to_vec(), dmus).unwrap()
}

pub fn unit_invariance(ds: &Dataset, rng: &mut ChaCha8Rng) -> Check {
    let mut factor = || 10f64.powf(rng.random_range(-3.0..3.0));
    let fi: Vec<f64> = (0..ds.n_inputs()).map(|_| factor()).collect();
    let fo: Vec<f64> = (0..ds.n_outputs()).map(|_| factor()).collect();
    let scaled = rescale(ds, &fi, &fo);
    for scenario in SCENARIOS {
        for rts in [RtsAssumption::Crs, RtsAssumption::Vrs] {
            let a = thetas(ds, scenario, rts);
            let b = thetas(&scaled, scenario, rts);
            for (k, (x, y)) in a.iter().zip(&b).enumerate() {
                if (x - y).abs() > 1e-7 {
                    return Err(format!("{scenario:?}/{rts:?} row {k}: {x} became {y} after rescaling"));
                }
            }
        }
    }
    Ok(())
}

pub fn append_never_raises(ds: &Dataset, rng: &mut ChaCha8Rng) -> Check {
    let mut bigger = ds.clone();
    let group = ds.dmus()[rng.random_range(0..ds.len())].group.clone();
    bigger.push(random_dmu(rng, "appended", &group, ds.n_inputs(), ds.n_outputs())).unwrap();
    for scenario in SCENARIOS {
        for rts in [RtsAssumption::Crs, RtsAssumption::Vrs] {
            let before = thetas(ds, scenario, rts);
            let after = thetas(&bigger, scenario, rts);
            for (k, (b, a)) in before.iter().zip(&after).enumerate() {
                if *a > b + 1e-9 {
                    return Err(format!("{scenario:?}/{rts:?} row {k}: {b} rose to {a}"));
                }
            }
        }
    }
    Ok(())
}

pub fn frontier_is_attained(ds: &Dataset) -> Check {
    for scenario in SCENARIOS {
        for rts in [RtsAssumption::Crs, RtsAssumption::Vrs] {
            let scores = thetas(ds, scenario, rts);
            for members in reference_sets(ds, scenario) {
                let best = members.iter().map(|&k| scores[k]).fold(f64::NEG_INFINITY, f64::max);
                if (best - 1.0).abs() > 1e-9 {
                    return Err(format!("{scenario:?}/{rts:?}: best score in reference set is {best}"));
                }
            }
        }
    }
    Ok(())
}

pub fn merged_not_above_per_group(ds: &Dataset) -> Check {
    for rts in [RtsAssumption::Crs, RtsAssumption::Vrs] {
        let pg = thetas(ds, GroupScenario::PerGroup, rts);
        let mg = thetas(ds, GroupScenario::Merged, rts);
        for (k, (p, m)) in pg.iter().zip(&mg).enumerate() {
            if *m > p + 1e-9 {
                return Err(format!("{rts:?} row {k}: merged {m} > per-group {p}"));
            }
        }
    }
    Ok(())
}
