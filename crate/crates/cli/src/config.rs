//! Run settings from a flat `key = value` file plus command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use radsub::grid::BoundaryKind;
use radsub::problems::{Comparison, ProblemSpec, TemperatureSpec};
use radsub::reconstruction::{Reconstruction, SlopeLimiting};
use radsub::riemann::WaveSpeeds;
use radsub::timestepper::{DtMode, SchemeOptions, StepControl};

use crate::CliError;

pub const KEYS: &[&str] = &[
    "problem",
    "ncell",
    "cfl",
    "dt_mode",
    "t_final",
    "outputs",
    "wave_speeds",
    "reconstruction",
    "limiting",
    "bc",
    "resolutions",
    "comparison",
    "out_dir",
    "cc",
    "sigma_a",
    "sigma_t",
    "f",
    "temperature",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", no + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key `{key}`", no + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub spec: ProblemSpec,
    pub ncell: usize,
    pub ctrl: StepControl,
    /// Ascending snapshot times; the last equals `ctrl.t_final`.
    pub outputs: Vec<f64>,
    pub opts: SchemeOptions,
    pub resolutions: Vec<usize>,
    pub comparison: Comparison,
    pub out_dir: PathBuf,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("`{key}`: cannot parse `{value}`: {e}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

impl Settings {
    /// Problem defaults, then every key in `map`.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let name = map
            .get("problem")
            .ok_or_else(|| CliError::Config("no problem given".into()))?;
        let mut spec = ProblemSpec::from_name(name)?;
        let get = |k: &str| map.get(k).map(String::as_str);

        if let Some(v) = get("cc") {
            spec.cc = parse("cc", v)?;
        }
        if let Some(v) = get("sigma_a") {
            spec.sigma_a = parse("sigma_a", v)?;
        }
        if let Some(v) = get("sigma_t") {
            spec.sigma_t = parse("sigma_t", v)?;
        }
        if let Some(v) = get("f") {
            spec.f = parse("f", v)?;
        }
        if let Some(v) = get("temperature") {
            spec.temperature = TemperatureSpec::Uniform(parse("temperature", v)?);
        }
        if let Some(v) = get("bc") {
            spec.bc = parse::<BoundaryKind>("bc", v)?;
        }
        if let Some(v) = get("cfl") {
            spec.cfl = parse("cfl", v)?;
        }
        if let Some(v) = get("dt_mode") {
            spec.dt_mode = parse::<DtMode>("dt_mode", v)?;
        }
        if let Some(v) = get("t_final") {
            spec.t_final = parse("t_final", v)?;
        }

        let mut outputs: Vec<f64> = match get("outputs") {
            Some(v) => parse_list("outputs", v)?,
            None => Vec::new(),
        };
        if outputs.is_empty() {
            outputs.push(spec.t_final);
        } else if get("t_final").is_none() {
            spec.t_final = outputs.iter().cloned().fold(0.0, f64::max);
        }
        if outputs.iter().any(|t| !(t.is_finite() && *t > 0.0 && *t <= spec.t_final)) {
            return Err(CliError::Config(format!(
                "output times must lie in (0, {:e}]",
                spec.t_final
            )));
        }
        outputs.sort_by(f64::total_cmp);
        outputs.dedup();

        if let Some(v) = get("resolutions") {
            spec.resolutions = parse_list("resolutions", v)?;
        }
        let ncell = match get("ncell") {
            Some(v) => parse("ncell", v)?,
            None => *spec.resolutions.last().unwrap_or(&256),
        };
        let comparison = match get("comparison") {
            Some(v) => parse::<Comparison>("comparison", v)?,
            None => spec.comparison,
        };

        let mut opts = SchemeOptions {
            bc: spec.bc,
            ..SchemeOptions::default()
        };
        if let Some(v) = get("wave_speeds") {
            opts.wave_speeds = parse::<WaveSpeeds>("wave_speeds", v)?;
        }
        if let Some(v) = get("reconstruction") {
            opts.reconstruction = parse::<Reconstruction>("reconstruction", v)?;
        }
        if let Some(v) = get("limiting") {
            opts.limiting = parse::<SlopeLimiting>("limiting", v)?;
        }

        let ctrl = spec.step_control()?;
        // surface bad physics before any output is written
        spec.params(ncell.max(1))?;
        Ok(Self {
            resolutions: spec.resolutions.clone(),
            spec,
            ncell,
            ctrl,
            outputs,
            opts,
            comparison,
            out_dir: PathBuf::from(get("out_dir").unwrap_or("out")),
        })
    }

    /// Directory holding everything written for this problem.
    pub fn problem_dir(&self) -> PathBuf {
        self.out_dir.join(self.spec.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use radsub::problems::ProblemKind;

    fn settings(text: &str) -> Result<Settings, CliError> {
        Settings::from_map(&parse_config(text)?)
    }

    #[test]
    fn comments_blank_lines_and_dashes() {
        let m = parse_config("# header\n\nproblem = weak_diffusion  # trailing\ndt-mode=parabolic\n").unwrap();
        assert_eq!(m["problem"], "weak_diffusion");
        assert_eq!(m["dt_mode"], "parabolic");
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(matches!(parse_config("colour = red"), Err(CliError::Config(_))));
        assert!(matches!(parse_config("problem"), Err(CliError::Config(_))));
    }

    #[test]
    fn defaults_come_from_the_problem() {
        let s = settings("problem = exp_relax").unwrap();
        assert_eq!(s.spec.kind, ProblemKind::ExpRelaxGrowth);
        assert_eq!(s.ncell, 256);
        assert_eq!(s.outputs, vec![1e-5]);
        assert_eq!(s.comparison, Comparison::Analytic);
        assert_eq!(s.resolutions, vec![32, 64, 128, 256]);
    }

    #[test]
    fn outputs_set_the_stop_time() {
        let s = settings("problem = weak_diffusion\noutputs = 64e-6, 0.25e-6, 1e-6, 4e-6, 16e-6").unwrap();
        assert_eq!(s.outputs, vec![0.25e-6, 1e-6, 4e-6, 16e-6, 64e-6]);
        assert_eq!(s.ctrl.t_final, 64e-6);
        assert!(settings("problem = weak_diffusion\nt_final = 1e-6\noutputs = 2e-6").is_err());
    }

    #[test]
    fn bad_values_are_config_errors() {
        for text in [
            "problem = nope",
            "",
            "problem = exp_relax\ncfl = 2",
            "problem = exp_relax\nbc = reflecting",
            "problem = exp_relax\nncell = -3",
            "problem = exp_relax\nsigma_t = 0.5",
        ] {
            let err = settings(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
    }

    #[test]
    fn scheme_overrides() {
        let s = settings(
            "problem = free_stream_gauss\nwave_speeds = plain\nreconstruction = pcm\nbc = periodic\nlimiting = characteristic",
        )
        .unwrap();
        assert_eq!(s.opts.wave_speeds, WaveSpeeds::Plain);
        assert_eq!(s.opts.reconstruction, Reconstruction::Pcm);
        assert_eq!(s.opts.limiting, SlopeLimiting::Characteristic);
        assert_eq!(s.opts.bc, BoundaryKind::Periodic);
        assert_eq!(s.spec.bc, BoundaryKind::Periodic);
    }
}
