//! Built-in methods addressable by name.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{make_optimal_family, shu_osher_to_butcher, DownwindLmm, DownwindTableau};
use crate::error::{Error, Result};

pub fn forward_euler() -> DownwindTableau {
    DownwindTableau::from_rows(&[&[0.0]], &[&[0.0]], &[1.0], &[0.0]).unwrap()
}

pub fn backward_euler() -> DownwindTableau {
    DownwindTableau::from_rows(&[&[1.0]], &[&[0.0]], &[1.0], &[0.0]).unwrap()
}

/// Implicit trapezoidal (Crank–Nicolson) Runge–Kutta method.
pub fn trapezoidal() -> DownwindTableau {
    DownwindTableau::from_rows(
        &[&[0.0, 0.0], &[0.5, 0.5]],
        &[&[0.0, 0.0], &[0.0, 0.0]],
        &[0.5, 0.5],
        &[0.0, 0.0],
    )
    .unwrap()
}

pub fn ssprk22() -> DownwindTableau {
    DownwindTableau::from_rows(
        &[&[0.0, 0.0], &[1.0, 0.0]],
        &[&[0.0, 0.0], &[0.0, 0.0]],
        &[0.5, 0.5],
        &[0.0, 0.0],
    )
    .unwrap()
}

pub fn ssprk33() -> DownwindTableau {
    DownwindTableau::from_rows(
        &[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.25, 0.25, 0.0]],
        &[&[0.0; 3], &[0.0; 3], &[0.0; 3]],
        &[1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
        &[0.0; 3],
    )
    .unwrap()
}

/// Butcher form of the optimal two-stage downwind family.
pub fn downwind_family(r: f64) -> Result<DownwindTableau> {
    shu_osher_to_butcher(&make_optimal_family(r)?)
}

/// A named built-in Runge–Kutta method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BuiltinMethod {
    ForwardEuler,
    BackwardEuler,
    Trapezoidal,
    Ssprk22,
    Ssprk33,
    DownwindFamily(f64),
}

impl BuiltinMethod {
    pub fn tableau(&self) -> Result<DownwindTableau> {
        Ok(match *self {
            BuiltinMethod::ForwardEuler => forward_euler(),
            BuiltinMethod::BackwardEuler => backward_euler(),
            BuiltinMethod::Trapezoidal => trapezoidal(),
            BuiltinMethod::Ssprk22 => ssprk22(),
            BuiltinMethod::Ssprk33 => ssprk33(),
            BuiltinMethod::DownwindFamily(r) => downwind_family(r)?,
        })
    }

    /// Explicit methods in the catalog (`s <= 3`).
    pub fn explicit_catalog() -> [BuiltinMethod; 3] {
        [
            BuiltinMethod::ForwardEuler,
            BuiltinMethod::Ssprk22,
            BuiltinMethod::Ssprk33,
        ]
    }
}

impl fmt::Display for BuiltinMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinMethod::ForwardEuler => f.write_str("forward-euler"),
            BuiltinMethod::BackwardEuler => f.write_str("backward-euler"),
            BuiltinMethod::Trapezoidal => f.write_str("trapezoidal"),
            BuiltinMethod::Ssprk22 => f.write_str("ssprk22"),
            BuiltinMethod::Ssprk33 => f.write_str("ssprk33"),
            BuiltinMethod::DownwindFamily(r) => write!(f, "dw-family:{r}"),
        }
    }
}

impl FromStr for BuiltinMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = match s {
            "forward-euler" => BuiltinMethod::ForwardEuler,
            "backward-euler" => BuiltinMethod::BackwardEuler,
            "trapezoidal" => BuiltinMethod::Trapezoidal,
            "ssprk22" => BuiltinMethod::Ssprk22,
            "ssprk33" => BuiltinMethod::Ssprk33,
            _ => match s.strip_prefix("dw-family:") {
                Some(rest) => {
                    let r: f64 = rest
                        .parse()
                        .map_err(|_| Error::domain(format!("bad family parameter `{rest}`")))?;
                    // validate the range eagerly
                    make_optimal_family(r)?;
                    BuiltinMethod::DownwindFamily(r)
                }
                None => return Err(Error::UnknownMethod(s.to_string())),
            },
        };
        Ok(m)
    }
}

/// Any method the library can analyze or integrate with.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    RungeKutta(DownwindTableau),
    Multistep(DownwindLmm),
}

impl Method {
    /// Parses a JSON method document. Documents with a `"k"` field are
    /// multistep methods; all others are read as tableaux.
    pub fn from_json(text: &str) -> Result<Method> {
        let probe: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "method document".into(),
            source: e,
        })?;
        if probe.get("k").is_some() {
            serde_json::from_str(text)
                .map(Method::Multistep)
                .map_err(|e| Error::Parse {
                    what: "multistep method".into(),
                    source: e,
                })
        } else {
            serde_json::from_str(text)
                .map(Method::RungeKutta)
                .map_err(|e| Error::Parse {
                    what: "Runge-Kutta tableau".into(),
                    source: e,
                })
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Method::RungeKutta(t) => serde_json::to_string_pretty(t),
            Method::Multistep(m) => serde_json::to_string_pretty(m),
        }
        .expect("method documents are always serializable")
    }

    /// Resolves a built-in name, or else reads a JSON file at that path.
    pub fn resolve(spec: &str) -> Result<Method> {
        match spec.parse::<BuiltinMethod>() {
            Ok(b) => Ok(Method::RungeKutta(b.tableau()?)),
            Err(Error::UnknownMethod(_)) if Path::new(spec).is_file() => {
                let text = std::fs::read_to_string(spec).map_err(|e| Error::io(spec, e))?;
                Method::from_json(&text)
            }
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in [
            "forward-euler",
            "backward-euler",
            "trapezoidal",
            "ssprk22",
            "ssprk33",
            "dw-family:8",
        ] {
            let m: BuiltinMethod = name.parse().unwrap();
            assert_eq!(m.to_string(), name);
            m.tableau().unwrap();
        }
        assert!(matches!(
            "dw-family:2".parse::<BuiltinMethod>(),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            "rk4".parse::<BuiltinMethod>(),
            Err(Error::UnknownMethod(_))
        ));
    }

    #[test]
    fn json_dispatch_and_diagnostics() {
        let t = Method::RungeKutta(trapezoidal());
        assert_eq!(Method::from_json(&t.to_json()).unwrap(), t);
        let l = Method::Multistep(DownwindLmm::trapezoidal());
        assert_eq!(Method::from_json(&l.to_json()).unwrap(), l);

        let bad = "{\n  \"s\": 1,\n  \"A\": [[0.0]],\n  \"Atilde\": [[0.0]],\n  \"b\": [1.0],\n  \"btilde\": [0.0],\n  \"c\": [\"x\"]\n}";
        let msg = Method::from_json(bad).unwrap_err().to_string();
        assert!(msg.contains("line 7"), "{msg}");

        let wrong_c = r#"{"s":1,"A":[[0.0]],"Atilde":[[0.0]],"b":[1.0],"btilde":[0.0],"c":[0.5]}"#;
        assert!(Method::from_json(wrong_c)
            .unwrap_err()
            .to_string()
            .contains("\"c\""));
    }

    #[test]
    fn exact_decimal_parsing() {
        let text = r#"{"s":1,"A":[[0.1]],"Atilde":[[0.0]],"b":[0.30000000000000004],"btilde":[0.0],"c":[0.1]}"#;
        let Method::RungeKutta(t) = Method::from_json(text).unwrap() else {
            panic!()
        };
        assert_eq!(t.a()[(0, 0)], 0.1);
        assert_eq!(t.b()[0], 0.1 + 0.2);
    }
}
