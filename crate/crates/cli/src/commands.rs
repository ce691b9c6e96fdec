use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use aptkit::barcode::Barcode;
use aptkit::catalog;
use aptkit::cutoff::{
    convolution_unit_check, delta_polytope, gamma_basis_witness, indicator_convolve,
    restrict_offsets, star_stalk_homology, OpenPolyhedron,
};
use aptkit::geometry::{separating_vector, validate_fan, FanInput};
use aptkit::graded::PresentationND;
use aptkit::interleaving::{
    certificate_bars, interleaving_distance, optimal_certificate, verify_interleaving,
    InterleavingCertificate,
};
use aptkit::rational::parse_q;
use aptkit::toric::{
    atlas, chart_of_cone, cocycle_check, root_ladder_level, transition_data, GradingGroup,
};
use aptkit::{Cone, Fan, Grade, QVec};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{
    BarcodeCmd, Cli, ConeCmd, CutoffCmd, DistCmd, FanCmd, Group, ModuleCmd, OtherArgs, ToricCmd,
};

type Result<T> = std::result::Result<T, CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(io)?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Loads the main operand from `--input` or `--catalog`.
fn operand<T: DeserializeOwned>(
    cli: &Cli,
    lookup: impl Fn(&str) -> Option<T>,
) -> Result<T> {
    match (&cli.input, &cli.catalog) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either --input or --catalog, not both".into(),
        )),
        (Some(path), None) => read_json(path),
        (None, Some(name)) => lookup(name).ok_or_else(|| CliError::UnknownCatalog(name.clone())),
        (None, None) => Err(CliError::Usage("missing --input or --catalog".into())),
    }
}

fn second<T: DeserializeOwned>(o: &OtherArgs, lookup: impl Fn(&str) -> Option<T>) -> Result<T> {
    match (&o.other, &o.other_catalog) {
        (Some(path), None) => read_json(path),
        (None, Some(name)) => lookup(name).ok_or_else(|| CliError::UnknownCatalog(name.clone())),
        _ => Err(CliError::Usage(
            "give exactly one of --other or --other-catalog".into(),
        )),
    }
}

fn catalog_fan(name: &str) -> Option<Fan> {
    if let Some(a) = name.strip_prefix("hirzebruch-") {
        return a.parse::<i64>().ok().map(catalog::hirzebruch);
    }
    catalog::fan(name)
}

fn no_catalog<T>(_: &str) -> Option<T> {
    None
}

fn point(s: &str) -> Result<QVec> {
    Ok(QVec::parse_csv(s)?)
}

fn cone_index(fan: &Fan, id: &str) -> Result<usize> {
    fan.index_of(id)
        .ok_or_else(|| CliError::UnknownCone(id.to_string()))
}

fn offsets(s: &str) -> Result<BTreeMap<String, Grade>> {
    Ok(serde_json::from_str(s)?)
}

fn grading(s: &str) -> Result<GradingGroup> {
    Ok(s.parse::<GradingGroup>()?)
}

pub fn run(cli: &Cli) -> Result<Value> {
    match &cli.group {
        Group::Cone(cmd) => cone(cli, cmd),
        Group::Fan(cmd) => fan(cli, cmd),
        Group::Barcode(cmd) => barcode(cli, cmd),
        Group::Dist(cmd) => dist(cli, cmd),
        Group::Cutoff(cmd) => cutoff(cli, cmd),
        Group::Toric(cmd) => toric(cli, cmd),
        Group::Module(cmd) => module(cli, cmd),
    }
}

fn cone(cli: &Cli, cmd: &ConeCmd) -> Result<Value> {
    let c: Cone = operand(cli, no_catalog)?;
    Ok(match cmd {
        ConeCmd::Dual => json!({ "dual": c.dual() }),
        ConeCmd::Proper => json!({ "proper": c.is_proper() }),
        ConeCmd::Faces => json!({ "faces": c.faces() }),
    })
}

fn load_fan(cli: &Cli) -> Result<Fan> {
    match &cli.catalog {
        Some(_) => operand(cli, catalog_fan),
        None => {
            let raw: FanInput = operand(cli, no_catalog)?;
            Ok(validate_fan(raw.dim, raw.cones)?)
        }
    }
}

fn fan(cli: &Cli, cmd: &FanCmd) -> Result<Value> {
    let f = load_fan(cli)?;
    Ok(match cmd {
        FanCmd::Validate => json!({ "valid": true, "complete": f.is_complete() }),
        FanCmd::Complete => json!({ "complete": f.is_complete() }),
        FanCmd::Separate(p) => {
            let s1 = f.cone(cone_index(&f, &p.sigma1)?);
            let s2 = f.cone(cone_index(&f, &p.sigma2)?);
            json!({ "m": separating_vector(s1, s2)? })
        }
        FanCmd::Support(p) => {
            let n = point(&p.point)?;
            if n.dim() != f.ambient_dim() {
                return Err(aptkit::GeometryError::DimensionMismatch {
                    expected: f.ambient_dim(),
                    found: n.dim(),
                }
                .into());
            }
            let star: Vec<&str> = f.star(&n).into_iter().map(|i| f.cones()[i].id.as_str()).collect();
            json!({ "in_support": f.support_contains(&n), "star": star })
        }
    })
}

fn dims_json(d: BTreeMap<i64, u64>) -> Value {
    let m: serde_json::Map<String, Value> =
        d.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Value::Object(m)
}

fn barcode(cli: &Cli, cmd: &BarcodeCmd) -> Result<Value> {
    let b: Barcode = operand(cli, catalog::barcode)?;
    Ok(match cmd {
        BarcodeCmd::Eval { at } => json!({ "dims": dims_json(b.eval_at(&parse_q(at)?)) }),
        BarcodeCmd::Shift { by } => serde_json::to_value(b.shift(&parse_q(by)?))?,
        BarcodeCmd::Convolve(o) => {
            let other: Barcode = second(o, catalog::barcode)?;
            serde_json::to_value(b.convolve(&other)?)?
        }
        BarcodeCmd::Almostize => serde_json::to_value(b.almostize())?,
        BarcodeCmd::K0 => json!({ "k0": b.k0_class()? }),
        BarcodeCmd::Torsion { c } => json!({ "torsion": b.is_c_torsion(&parse_q(c)?)? }),
        BarcodeCmd::QuotientLoc => serde_json::to_value(b.quotient_by_locals())?,
        BarcodeCmd::Homdim(o) => {
            let other: Barcode = second(o, catalog::barcode)?;
            json!({ "dim": b.torsionfree_hom_dim(&other)? })
        }
    })
}

fn bars_json(b: &Barcode) -> Result<Value> {
    let bars: Vec<Value> = certificate_bars(b)?
        .into_iter()
        .enumerate()
        .map(|(i, (iv, deg))| json!({ "index": i, "interval": iv.to_string(), "degree": deg }))
        .collect();
    Ok(Value::Array(bars))
}

fn dist(cli: &Cli, cmd: &DistCmd) -> Result<Value> {
    let x: Barcode = operand(cli, catalog::barcode)?;
    Ok(match cmd {
        DistCmd::Compute(o) => {
            let y: Barcode = second(o, catalog::barcode)?;
            json!({
                "distance": interleaving_distance(&x, &y)?,
                "certificate": optimal_certificate(&x, &y)?,
                "x_bars": bars_json(&x)?,
                "y_bars": bars_json(&y)?,
            })
        }
        DistCmd::Verify { other, certificate } => {
            let y: Barcode = second(other, catalog::barcode)?;
            let cert: InterleavingCertificate = read_json(certificate)?;
            json!({ "valid": verify_interleaving(&x, &y, &cert)? })
        }
    })
}

fn cutoff(cli: &Cli, cmd: &CutoffCmd) -> Result<Value> {
    Ok(match cmd {
        CutoffCmd::Delta { offsets: o, cone_id } => {
            let f = load_fan(cli)?;
            let mut d = offsets(&o.offsets)?;
            if let Some(id) = cone_id {
                d = restrict_offsets(&f, cone_index(&f, id)?, &d);
            }
            json!({ "delta": delta_polytope(&f, &d)? })
        }
        CutoffCmd::Mink { offsets: o, cone_id } => {
            let f = load_fan(cli)?;
            let d = offsets(&o.offsets)?;
            let i = cone_index(&f, cone_id)?;
            let restricted = delta_polytope(&f, &restrict_offsets(&f, i, &d))?;
            let full = delta_polytope(&f, &d)?;
            let sum = full.minkowski_with_cone(&f.cone(i).dual())?;
            json!({
                "restricted": restricted,
                "minkowski": sum,
                "equal": restricted.set_eq(&sum),
            })
        }
        CutoffCmd::BasisWitness { point: p, gamma } => {
            let u: OpenPolyhedron = operand(cli, no_catalog)?;
            let g: Cone = read_json(gamma)?;
            let x = point(&p.point)?;
            json!({ "a": gamma_basis_witness(&u, &x, &g)? })
        }
        CutoffCmd::StarHomology(p) => {
            let f = load_fan(cli)?;
            serde_json::to_value(star_stalk_homology(&f, &point(&p.point)?, cli.field)?)?
        }
        CutoffCmd::UnitCheck => {
            let f = load_fan(cli)?;
            serde_json::to_value(convolution_unit_check(&f, cli.field)?)?
        }
        CutoffCmd::IndicatorConvolve { other } => {
            let a: OpenPolyhedron = operand(cli, no_catalog)?;
            let b: OpenPolyhedron = read_json(other)?;
            let s = indicator_convolve(&a, &b)?;
            json!({ "support": s.support, "shift": s.shift })
        }
    })
}

fn toric(cli: &Cli, cmd: &ToricCmd) -> Result<Value> {
    let f = load_fan(cli)?;
    let chart = |id: &str, g: GradingGroup| -> Result<_> {
        Ok(chart_of_cone(f.cone(cone_index(&f, id)?), g)?)
    };
    Ok(match cmd {
        ToricCmd::Charts(g) => serde_json::to_value(atlas(&f, grading(&g.grading)?)?)?,
        ToricCmd::Transition(p) => {
            let t = transition_data(
                &chart(&p.sigma1, GradingGroup::Rational)?,
                &chart(&p.sigma2, GradingGroup::Rational)?,
            )?;
            serde_json::to_value(t)?
        }
        ToricCmd::Cocycle { ids } => {
            let ids: Vec<&str> = ids.split(',').map(str::trim).collect();
            let [a, b, c] = ids.as_slice() else {
                return Err(CliError::Usage("--ids needs exactly three cone ids".into()));
            };
            let r = cocycle_check(
                &chart(a, GradingGroup::Rational)?,
                &chart(b, GradingGroup::Rational)?,
                &chart(c, GradingGroup::Rational)?,
            )?;
            serde_json::to_value(r)?
        }
        ToricCmd::Boundary => {
            json!({ "boundary": atlas(&f, GradingGroup::Rational)?.boundary })
        }
        ToricCmd::RootLevel { cone_id, point: p } => {
            let c = chart(cone_id, GradingGroup::Rational)?;
            json!({ "level": root_ladder_level(&c, &point(&p.point)?)? })
        }
    })
}

fn module(cli: &Cli, cmd: &ModuleCmd) -> Result<Value> {
    if let ModuleCmd::Present = cmd {
        let b: Barcode = operand(cli, catalog::barcode)?;
        return Ok(serde_json::to_value(PresentationND::from_barcode(&b)?)?);
    }
    let p: PresentationND = operand(cli, catalog::presentation)?;
    Ok(match cmd {
        ModuleCmd::Eval { at } => json!({ "dim": p.eval_at(&point(at)?, cli.field)? }),
        ModuleCmd::Tensor(o) => {
            let other: PresentationND = second(o, catalog::presentation)?;
            serde_json::to_value(p.h0_tensor(&other)?)?
        }
        ModuleCmd::Barcode => serde_json::to_value(p.barcode(cli.field)?)?,
        ModuleCmd::Present => unreachable!("handled above"),
    })
}
