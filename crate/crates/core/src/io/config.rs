//! Run configuration files.
//!
//! ```text
//! # comment
//! [case]
//! name = rp1            # a built-in case, or a new name together with `kind`
//! end_time = 0.075
//! gauges = g0:0.0:0.0, g1:0.5:0.0
//! eta_l = 1.0           # kind parameters
//!
//! [mesh]
//! type = structured
//! nx = 200
//!
//! [numerics]
//! theta = 0.51
//!
//! [physics]
//! g = 9.81
//!
//! [output]
//! dir = out
//! every = 10
//! vtk = true
//! ```
//!
//! A built-in case name starts from that case's settings; `kind` starts from
//! the kind's defaults with default numerics (theta = 1, no extra
//! dissipation). Unknown sections and keys are errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::cases::{case_by_name, CaseKind, CaseSpec, MeshSpec};
use crate::error::{ConfigError, Error};
use crate::mesh::{Pattern, Side, Sides};
use crate::state::{NumericsConfig, Scheme};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    /// Write a snapshot every `every` steps.
    pub every: Option<usize>,
    /// Write a snapshot every `dt_out` time units.
    pub dt_out: Option<f64>,
    pub vtk: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseSpec,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_case(case: CaseSpec) -> Self {
        RunConfig {
            case,
            output: OutputConfig::default(),
        }
    }
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

const SECTIONS: [&str; 5] = ["case", "mesh", "numerics", "physics", "output"];

fn split_sections(text: &str) -> Result<Vec<(String, Vec<Entry>)>, ConfigError> {
    let mut sections: Vec<(String, Vec<Entry>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    msg: format!("unterminated section header `{l}`"),
                })?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::UnknownSection(name.to_string()));
            }
            if sections.iter().any(|(s, _)| s == name) {
                return Err(ConfigError::Syntax {
                    line,
                    msg: format!("section [{name}] appears twice"),
                });
            }
            sections.push((name.to_string(), Vec::new()));
            continue;
        }
        let (key, value) = l.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("expected `key = value`, got `{l}`"),
        })?;
        let Some((_, entries)) = sections.last_mut() else {
            return Err(ConfigError::Syntax {
                line,
                msg: "key outside of any section".into(),
            });
        };
        let key = key.trim().to_string();
        if entries.iter().any(|e| e.key == key) {
            return Err(ConfigError::Syntax {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        entries.push(Entry {
            key,
            value: value.to_string(),
            line,
        });
    }
    Ok(sections)
}

fn type_err(e: &Entry, expected: &'static str) -> ConfigError {
    ConfigError::Type {
        line: e.line,
        key: e.key.clone(),
        expected,
        value: e.value.clone(),
    }
}

fn unknown(section: &str, e: &Entry) -> ConfigError {
    ConfigError::UnknownKey {
        line: e.line,
        section: section.to_string(),
        key: e.key.clone(),
    }
}

fn float(e: &Entry) -> Result<f64, ConfigError> {
    e.value.parse().map_err(|_| type_err(e, "a number"))
}

fn count(e: &Entry) -> Result<usize, ConfigError> {
    e.value.parse().map_err(|_| type_err(e, "a non-negative integer"))
}

fn boolean(e: &Entry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(type_err(e, "true or false")),
    }
}

fn floats<const N: usize>(e: &Entry, expected: &'static str) -> Result<[f64; N], ConfigError> {
    let v: Vec<f64> = e
        .value
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| type_err(e, expected))?;
    v.try_into().map_err(|_| type_err(e, expected))
}

fn parsed<T: FromStr>(e: &Entry, expected: &'static str) -> Result<T, ConfigError> {
    e.value.parse().map_err(|_| type_err(e, expected))
}

fn optional<T>(e: &Entry, f: impl Fn(&Entry) -> Result<T, ConfigError>) -> Result<Option<T>, ConfigError> {
    if e.value == "none" {
        Ok(None)
    } else {
        f(e).map(Some)
    }
}

fn gauges(e: &Entry) -> Result<Vec<(String, [f64; 2])>, ConfigError> {
    let expected = "a comma-separated list of name:x:y";
    e.value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.split(':').collect();
            match parts[..] {
                [name, x, y] if !name.is_empty() => {
                    let x = x.trim().parse().map_err(|_| type_err(e, expected))?;
                    let y = y.trim().parse().map_err(|_| type_err(e, expected))?;
                    Ok((name.trim().to_string(), [x, y]))
                }
                _ => Err(type_err(e, expected)),
            }
        })
        .collect()
}

fn base_case(entries: &[Entry]) -> Result<CaseSpec, ConfigError> {
    let get = |k: &str| entries.iter().find(|e| e.key == k);
    let name = get("name").ok_or(ConfigError::MissingCase)?;
    match get("kind") {
        None => case_by_name(&name.value).ok_or_else(|| ConfigError::UnknownCase(name.value.clone())),
        Some(k) => {
            let kind = CaseKind::from_name(&k.value).ok_or_else(|| type_err(k, "a case kind"))?;
            let mesh = MeshSpec::from_type("structured").expect("known mesh type");
            Ok(CaseSpec::new(&name.value, kind, mesh, NumericsConfig::default(), 1.0))
        }
    }
}

fn apply_case(case: &mut CaseSpec, entries: &[Entry]) -> Result<(), ConfigError> {
    for e in entries {
        match e.key.as_str() {
            "name" | "kind" => {}
            "end_time" => case.end_time = float(e)?,
            "gauges" => case.gauges = gauges(e)?,
            key => {
                if !case.kind.params().iter().any(|(k, _)| *k == key) {
                    return Err(unknown("case", e));
                }
                case.kind.set_param(key, float(e)?);
            }
        }
    }
    Ok(())
}

fn apply_mesh(mesh: &mut MeshSpec, entries: &[Entry]) -> Result<(), ConfigError> {
    if let Some(t) = entries.iter().find(|e| e.key == "type") {
        if t.value != mesh.type_name() {
            *mesh = MeshSpec::from_type(&t.value).ok_or_else(|| type_err(t, "a mesh type"))?;
        }
    }
    for e in entries.iter().filter(|e| e.key != "type") {
        let bad = || unknown("mesh", e);
        match mesh {
            MeshSpec::Structured {
                bounds,
                nx,
                ny,
                pattern,
                sides,
            } => match e.key.as_str() {
                "bounds" => *bounds = floats(e, "4 comma-separated numbers")?,
                "nx" => *nx = count(e)?,
                "ny" => *ny = count(e)?,
                "pattern" => *pattern = parsed::<Pattern>(e, "uniform or alternating")?,
                "left" => sides.left = parsed::<Side>(e, "a side type")?,
                "right" => sides.right = parsed::<Side>(e, "a side type")?,
                "bottom" => sides.bottom = parsed::<Side>(e, "a side type")?,
                "top" => sides.top = parsed::<Side>(e, "a side type")?,
                _ => return Err(bad()),
            },
            MeshSpec::File(path) => match e.key.as_str() {
                "path" => *path = PathBuf::from(&e.value),
                _ => return Err(bad()),
            },
            MeshSpec::Cylinder {
                r_c,
                half_width,
                n_theta,
                n_r,
                stretch,
            } => match e.key.as_str() {
                "r_c" => *r_c = float(e)?,
                "half_width" => *half_width = float(e)?,
                "n_theta" => *n_theta = count(e)?,
                "n_r" => *n_r = count(e)?,
                "stretch" => *stretch = float(e)?,
                _ => return Err(bad()),
            },
            MeshSpec::HalfAnnulus {
                center,
                r_in,
                r_out,
                n_theta,
                n_r,
            } => match e.key.as_str() {
                "center" => *center = floats(e, "2 comma-separated numbers")?,
                "r_in" => *r_in = float(e)?,
                "r_out" => *r_out = float(e)?,
                "n_theta" => *n_theta = count(e)?,
                "n_r" => *n_r = count(e)?,
                _ => return Err(bad()),
            },
            MeshSpec::Dambreak {
                cells_per_meter,
                gate_half_width,
            } => match e.key.as_str() {
                "cells_per_meter" => *cells_per_meter = count(e)?,
                "gate_half_width" => *gate_half_width = float(e)?,
                _ => return Err(bad()),
            },
        }
    }
    if let MeshSpec::File(path) = mesh {
        if path.as_os_str().is_empty() {
            return Err(ConfigError::Range {
                key: "path".into(),
                msg: "file meshes need a path".into(),
            });
        }
    }
    Ok(())
}

fn apply_numerics(n: &mut NumericsConfig, entries: &[Entry]) -> Result<(), ConfigError> {
    for e in entries {
        match e.key.as_str() {
            "cfl" => n.cfl = float(e)?,
            "theta" => n.theta = float(e)?,
            "c_alpha" => n.c_alpha = float(e)?,
            "fe_rusanov" => n.fe_rusanov = boolean(e)?,
            "use_lader" => n.use_lader = boolean(e)?,
            "eps_vel" => n.eps_vel = float(e)?,
            "h_dry" => n.h_dry = float(e)?,
            "dt_max" => n.dt_max = float(e)?,
            "fixed_dt" => n.fixed_dt = optional(e, float)?,
            "cg_tol" => n.cg_tol = float(e)?,
            "cg_maxiter" => n.cg_maxiter = count(e)?,
            "scheme" => n.scheme = parsed::<Scheme>(e, "wp1, wp2 or wp3")?,
            _ => return Err(unknown("numerics", e)),
        }
    }
    Ok(())
}

fn apply_output(o: &mut OutputConfig, entries: &[Entry]) -> Result<(), ConfigError> {
    for e in entries {
        match e.key.as_str() {
            "dir" => o.dir = optional(e, |e| Ok(PathBuf::from(&e.value)))?,
            "every" => o.every = optional(e, count)?,
            "dt_out" => o.dt_out = optional(e, float)?,
            "vtk" => o.vtk = boolean(e)?,
            _ => return Err(unknown("output", e)),
        }
    }
    let range = |key: &str, msg: &str| ConfigError::Range {
        key: key.into(),
        msg: msg.into(),
    };
    if o.every == Some(0) {
        return Err(range("every", "must be positive"));
    }
    if o.dt_out.is_some_and(|d| !(d > 0.0 && d.is_finite())) {
        return Err(range("dt_out", "must be positive"));
    }
    if o.every.is_some() && o.dt_out.is_some() {
        return Err(range("every", "set either `every` or `dt_out`, not both"));
    }
    Ok(())
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let sections = split_sections(text)?;
    let section = |name: &str| {
        sections
            .iter()
            .find(|(s, _)| s == name)
            .map(|(_, e)| e.as_slice())
            .unwrap_or(&[])
    };
    let mut case = base_case(section("case"))?;
    apply_case(&mut case, section("case"))?;
    apply_mesh(&mut case.mesh, section("mesh"))?;
    apply_numerics(&mut case.numerics, section("numerics"))?;
    for e in section("physics") {
        match e.key.as_str() {
            "g" => case.params.g = float(e)?,
            "n_manning" => case.params.n_manning = float(e)?,
            _ => return Err(unknown("physics", e)),
        }
    }
    let mut output = OutputConfig::default();
    apply_output(&mut output, section("output"))?;
    case.validate().map_err(|err| match err {
        Error::Config(c) => c,
        other => ConfigError::Range {
            key: "case".into(),
            msg: other.to_string(),
        },
    })?;
    Ok(RunConfig { case, output })
}

pub fn read_config(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Writes every setting explicitly; `parse_config` reads it back unchanged.
pub fn write_config(cfg: &RunConfig) -> String {
    let c = &cfg.case;
    let mut s = String::new();
    let _ = writeln!(s, "[case]\nname = {}\nkind = {}\nend_time = {:?}", c.name, c.kind.name(), c.end_time);
    for (k, v) in c.kind.params() {
        let _ = writeln!(s, "{k} = {v:?}");
    }
    if !c.gauges.is_empty() {
        let list: Vec<String> = c
            .gauges
            .iter()
            .map(|(n, p)| format!("{n}:{:?}:{:?}", p[0], p[1]))
            .collect();
        let _ = writeln!(s, "gauges = {}", list.join(", "));
    }
    let _ = writeln!(s, "\n[mesh]\ntype = {}", c.mesh.type_name());
    match &c.mesh {
        MeshSpec::Structured {
            bounds,
            nx,
            ny,
            pattern,
            sides: Sides { left, right, bottom, top },
        } => {
            let b: Vec<String> = bounds.iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(s, "bounds = {}\nnx = {nx}\nny = {ny}\npattern = {pattern}", b.join(", "));
            let _ = writeln!(s, "left = {left}\nright = {right}\nbottom = {bottom}\ntop = {top}");
        }
        MeshSpec::File(path) => {
            let _ = writeln!(s, "path = {}", path.display());
        }
        MeshSpec::Cylinder {
            r_c,
            half_width,
            n_theta,
            n_r,
            stretch,
        } => {
            let _ = writeln!(
                s,
                "r_c = {r_c:?}\nhalf_width = {half_width:?}\nn_theta = {n_theta}\nn_r = {n_r}\nstretch = {stretch:?}"
            );
        }
        MeshSpec::HalfAnnulus {
            center,
            r_in,
            r_out,
            n_theta,
            n_r,
        } => {
            let _ = writeln!(
                s,
                "center = {:?}, {:?}\nr_in = {r_in:?}\nr_out = {r_out:?}\nn_theta = {n_theta}\nn_r = {n_r}",
                center[0], center[1]
            );
        }
        MeshSpec::Dambreak {
            cells_per_meter,
            gate_half_width,
        } => {
            let _ = writeln!(s, "cells_per_meter = {cells_per_meter}\ngate_half_width = {gate_half_width:?}");
        }
    }
    let n = &c.numerics;
    let fixed = n.fixed_dt.map_or("none".to_string(), |v| format!("{v:?}"));
    let _ = writeln!(
        s,
        "\n[numerics]\ncfl = {:?}\ntheta = {:?}\nc_alpha = {:?}\nfe_rusanov = {}\nuse_lader = {}\neps_vel = {:?}\nh_dry = {:?}\ndt_max = {:?}\nfixed_dt = {fixed}\ncg_tol = {:?}\ncg_maxiter = {}\nscheme = {}",
        n.cfl, n.theta, n.c_alpha, n.fe_rusanov, n.use_lader, n.eps_vel, n.h_dry, n.dt_max, n.cg_tol, n.cg_maxiter, n.scheme
    );
    let _ = writeln!(s, "\n[physics]\ng = {:?}\nn_manning = {:?}", c.params.g, c.params.n_manning);
    let o = &cfg.output;
    let _ = writeln!(
        s,
        "\n[output]\ndir = {}\nevery = {}\ndt_out = {}\nvtk = {}",
        o.dir.as_ref().map_or("none".to_string(), |d| d.display().to_string()),
        o.every.map_or("none".to_string(), |v| v.to_string()),
        o.dt_out.map_or("none".to_string(), |v| format!("{v:?}")),
        o.vtk
    );
    s
}
