use std::path::Path;

use super::{check_hecke_relations, CoefficientSeries, Normalization, SpectralData, Values};
use crate::error::{Error, Result};
use crate::numerics::{c, Complex};

/// Hecke residual above which a loaded series carries a warning.
pub const HECKE_WARN_THRESHOLD: f64 = 1e-6;

/// Read a Maass coefficient file. See [`parse_maass_coefficients`].
pub fn load_maass_coefficients(path: &Path) -> Result<CoefficientSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_maass_coefficients(&text)
}

/// Parse the Maass coefficient text format:
///
/// ```text
/// # R 13.779751351891
/// # parity even
/// # normalization hecke
/// 1 1.0
/// 2 1.549304 0.0
/// ```
///
/// Header lines start with `#`; `R`, `parity` and `normalization` are
/// required and an optional `count` must match the body. Body lines are
/// `<n> <re> [<im>]` with n running 1, 2, 3, … without gaps. The spectral
/// parameter is λ = 2iR. `hecke` means a_1 = 1 is expected; `unitary`
/// means an arbitrary a_1 scaling. The Hecke check always runs and its
/// outcome is attached as a warning when the residual is large.
pub fn parse_maass_coefficients(text: &str) -> Result<CoefficientSeries> {
    let mut r_value: Option<f64> = None;
    let mut parity: Option<u8> = None;
    let mut hecke: Option<bool> = None;
    let mut count: Option<usize> = None;
    let mut values: Vec<Complex> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let mut parts = header.split_whitespace();
            let (Some(key), value) = (parts.next(), parts.next()) else {
                continue;
            };
            match key {
                "R" => {
                    let v = value
                        .and_then(|v| v.parse::<f64>().ok())
                        .filter(|v| v.is_finite() && *v >= 0.0)
                        .ok_or_else(|| err("R must be a non-negative number".into()))?;
                    r_value = Some(v);
                }
                "parity" => {
                    parity = Some(match value {
                        Some("even") => 0,
                        Some("odd") => 1,
                        other => return Err(err(format!("parity must be even or odd, got {other:?}"))),
                    });
                }
                "normalization" => {
                    hecke = Some(match value {
                        Some("hecke") => true,
                        Some("unitary") => false,
                        other => return Err(err(format!("normalization must be hecke or unitary, got {other:?}"))),
                    });
                }
                "count" => {
                    count = Some(
                        value
                            .and_then(|v| v.parse::<usize>().ok())
                            .ok_or_else(|| err("count must be a non-negative integer".into()))?,
                    );
                }
                // free-form comments
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(err(format!("expected `<n> <re> [<im>]`, got {} fields", fields.len())));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| err(format!("bad index {:?}", fields[0])))?;
        if n != values.len() + 1 {
            return Err(err(format!("expected index {}, got {n}", values.len() + 1)));
        }
        let re: f64 = fields[1]
            .parse()
            .map_err(|_| err(format!("bad real part {:?}", fields[1])))?;
        let im: f64 = match fields.get(2) {
            Some(f) => f.parse().map_err(|_| err(format!("bad imaginary part {f:?}")))?,
            None => 0.0,
        };
        if !(re.is_finite() && im.is_finite()) {
            return Err(err("non-finite coefficient".into()));
        }
        values.push(c(re, im));
    }

    let missing = |what: &str| Error::Parse {
        line: 0,
        message: format!("missing `# {what}` header"),
    };
    let r_value = r_value.ok_or_else(|| missing("R"))?;
    let parity = parity.ok_or_else(|| missing("parity"))?;
    let hecke = hecke.ok_or_else(|| missing("normalization"))?;
    if values.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no coefficient rows".into(),
        });
    }
    if let Some(n) = count {
        if n != values.len() {
            return Err(Error::Parse {
                line: 0,
                message: format!("header count {n} but {} rows", values.len()),
            });
        }
    }

    let spectral = SpectralData::maass(c(0.0, 2.0 * r_value), parity)?;
    let mut series = CoefficientSeries::new(spectral, Values::Complex(values), Normalization::Unitary);
    series.hecke_normalized = hecke;
    let a1 = series.get(1).expect("non-empty");
    if hecke && (a1 - c(1.0, 0.0)).norm() > HECKE_WARN_THRESHOLD {
        series
            .warnings
            .push(format!("normalization: header says hecke but a_1 = {a1}"));
    }
    let report = check_hecke_relations(&series);
    if report.max_residual() > HECKE_WARN_THRESHOLD {
        series.warnings.push(format!(
            "hecke: residual {:.3e} (multiplicative {:.3e} at {:?}, prime power {:.3e} at {:?})",
            report.max_residual(),
            report.multiplicative,
            report.worst_pair,
            report.prime_power,
            report.worst_prime_power
        ));
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Hecke-consistent synthetic data: a_n multiplicative with
    // a_{p^k} = U_k(cos θ_p), Chebyshev of the second kind
    fn synthetic(count: usize) -> String {
        let mut a = vec![0.0f64; count + 1];
        a[1] = 1.0;
        for n in 2..=count {
            let mut m = n;
            let mut value = 1.0;
            let mut p = 2;
            while m > 1 {
                if m % p == 0 {
                    let mut k = 0;
                    while m % p == 0 {
                        m /= p;
                        k += 1;
                    }
                    let theta = (p as f64).sqrt();
                    value *= ((k + 1) as f64 * theta).sin() / theta.sin();
                }
                p += 1;
            }
            a[n] = value;
        }
        let mut out = String::from("# R 9.5336952613\n# parity even\n# normalization hecke\n");
        for (n, v) in a.iter().enumerate().skip(1) {
            out.push_str(&format!("{n} {v:e}\n"));
        }
        out
    }

    #[test]
    fn loads_consistent_data_without_warnings() {
        let s = parse_maass_coefficients(&synthetic(200)).unwrap();
        assert_eq!(s.len(), 200);
        assert!(s.warnings.is_empty(), "{:?}", s.warnings);
        match s.spectral {
            SpectralData::Maass { lambda, parity } => {
                assert_eq!(parity, 0);
                assert!((lambda - c(0.0, 19.0673905226)).norm() < 1e-12);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn reads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        std::fs::write(&path, synthetic(20)).unwrap();
        assert_eq!(load_maass_coefficients(&path).unwrap().len(), 20);
        assert!(matches!(load_maass_coefficients(&dir.path().join("none")), Err(Error::Io { .. })));
    }

    #[test]
    fn inconsistent_data_warns() {
        let text = "# R 1\n# parity even\n# normalization hecke\n1 1\n2 0.5\n3 0.5\n4 0.1\n5 0\n6 9\n";
        let s = parse_maass_coefficients(text).unwrap();
        assert_eq!(s.warnings.len(), 1);
        assert!(s.warnings[0].starts_with("hecke"));
    }

    #[test]
    fn odd_header_with_bad_first_coefficient_warns() {
        let text = "# R 12.17\n# parity odd\n# normalization hecke\n1 2\n2 0 1\n";
        let s = parse_maass_coefficients(text).unwrap();
        assert!(s.warnings.iter().any(|w| w.starts_with("normalization")));
        assert_eq!(s.spectral.parity(), Some(1));
        assert_eq!(s.get(2), Some(c(0.0, 1.0)));
    }

    #[test]
    fn malformed_inputs() {
        let head = "# R 1\n# parity even\n# normalization hecke\n";
        assert!(matches!(parse_maass_coefficients(head), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_maass_coefficients(&format!("{head}1 1\n3 1\n")),
            Err(Error::Parse { line: 5, .. })
        ));
        assert!(parse_maass_coefficients("# parity even\n# normalization hecke\n1 1\n").is_err());
        assert!(parse_maass_coefficients(&format!("{head}# count 3\n1 1\n2 1\n")).is_err());
        assert!(parse_maass_coefficients(&format!("{head}1 x\n")).is_err());
        assert!(parse_maass_coefficients("# R 1\n# parity both\n").is_err());
    }
}
