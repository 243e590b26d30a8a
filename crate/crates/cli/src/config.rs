//! Scenario configuration: a TOML file merged with command-line flags
//! (flags win). Unknown keys are rejected up front.

use serde::Deserialize;

use histate::linalg::C64;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Must match the subcommand when both are given.
    pub mode: Option<String>,
    #[serde(default)]
    pub parameters: Params,
    pub output: Option<OutputSection>,
}

/// Mode-specific parameters; each mode reads the subset it understands.
#[derive(Debug, Default, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Clock dimension, or a comma list with optional `inf` for sweeps.
    #[serde(rename = "N")]
    pub n: Option<String>,
    pub n_qubits: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub phi: Option<f64>,
    pub phi_grid: Option<String>,
    pub p: Option<f64>,
    pub theta: Option<f64>,
    pub seed: Option<u64>,
    pub energies: Option<String>,
    pub basis: Option<String>,
    pub psi0: Option<String>,
    pub psi0_b: Option<String>,
    pub c: Option<String>,
    #[serde(rename = "U")]
    pub u: Option<String>,
    pub suite: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: Option<String>,
}

pub fn load_file(path: &str) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {path}: {e}"))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {path}: {e}"))
}

/// `a` overrides `b` field by field.
pub fn merge(a: Params, b: Params) -> Params {
    Params {
        n: a.n.or(b.n),
        n_qubits: a.n_qubits.or(b.n_qubits),
        m: a.m.or(b.m),
        phi: a.phi.or(b.phi),
        phi_grid: a.phi_grid.or(b.phi_grid),
        p: a.p.or(b.p),
        theta: a.theta.or(b.theta),
        seed: a.seed.or(b.seed),
        energies: a.energies.or(b.energies),
        basis: a.basis.or(b.basis),
        psi0: a.psi0.or(b.psi0),
        psi0_b: a.psi0_b.or(b.psi0_b),
        c: a.c.or(b.c),
        u: a.u.or(b.u),
        suite: a.suite.or(b.suite),
    }
}

/// Parses one complex amplitude: `1`, `-0.5`, `2i`, `1+2i`, `0.5-0.5i`, `i`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty amplitude".into());
    }
    if let Some(im) = t.strip_suffix(['i', 'j']) {
        // find the split between real and imaginary parts, if any
        let chars: Vec<char> = im.chars().collect();
        for pos in (1..chars.len()).rev() {
            if (chars[pos] == '+' || chars[pos] == '-')
                && chars[pos - 1] != 'e'
                && chars[pos - 1] != 'E'
            {
                let (re_s, im_s) = im.split_at(pos);
                let re: f64 = re_s.parse().map_err(|_| format!("bad amplitude '{s}'"))?;
                let imag: f64 = match im_s {
                    "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse().map_err(|_| format!("bad amplitude '{s}'"))?,
                };
                return Ok(C64::new(re, imag));
            }
        }
        let imag: f64 = match im {
            "" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| format!("bad amplitude '{s}'"))?,
        };
        return Ok(C64::new(0.0, imag));
    }
    let re: f64 = t.parse().map_err(|_| format!("bad amplitude '{s}'"))?;
    Ok(C64::new(re, 0.0))
}

pub fn parse_complex_list(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number '{x}'")))
        .collect()
}

/// A clock-dimension entry: finite or the closed-form limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NSpec {
    Finite(usize),
    Inf,
}

pub fn parse_n_list(s: &str) -> Result<Vec<NSpec>, String> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            if x.eq_ignore_ascii_case("inf") {
                Ok(NSpec::Inf)
            } else {
                x.parse::<usize>().map(NSpec::Finite).map_err(|_| format!("bad N '{x}'"))
            }
        })
        .collect()
}

/// `start:stop:step`, inclusive of endpoints within round-off.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![single
            .trim()
            .parse()
            .map_err(|_| format!("bad grid '{s}'"))?]),
        [start, stop, step] => {
            let a: f64 = start.trim().parse().map_err(|_| format!("bad grid '{s}'"))?;
            let b: f64 = stop.trim().parse().map_err(|_| format!("bad grid '{s}'"))?;
            let h: f64 = step.trim().parse().map_err(|_| format!("bad grid '{s}'"))?;
            if h <= 0.0 {
                return Err(format!("grid step must be positive in '{s}'"));
            }
            let mut out = Vec::new();
            let mut k = 0usize;
            loop {
                let x = a + h * k as f64;
                if x > b + 1e-12 {
                    break;
                }
                out.push(x);
                k += 1;
            }
            Ok(out)
        }
        _ => Err(format!("bad grid '{s}' (expected start:stop:step)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), C64::new(-0.5, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("0.5-0.5i").unwrap(), C64::new(0.5, -0.5));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), C64::new(1e-3, 2e-4));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn grids_and_lists() {
        assert_eq!(parse_grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("2.5").unwrap(), vec![2.5]);
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(
            parse_n_list("2,4,inf").unwrap(),
            vec![NSpec::Finite(2), NSpec::Finite(4), NSpec::Inf]
        );
        // an empty sweep is valid: start beyond stop
        assert!(parse_grid("1:0.5:1").unwrap().is_empty());
    }
}
