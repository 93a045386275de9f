use std::fmt;

/// Generators of the low-arity fragment and of its universal bimodule.
///
/// `D(n)` is only used for `n >= 3`; `d(2)` is the same element as `m2_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    P,
    M2(u32),
    M3(u32),
    D(u32),
    F0,
    F1,
    F2(u32),
    F3(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Operad,
    Bimodule,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{0} is not a generator of the fragment")]
    Unknown(String),
}

impl Generator {
    pub fn m2(k: u32) -> Self {
        Generator::M2(k)
    }

    /// `d(n)`; `d(2)` is `m2_0`.
    pub fn d(n: u32) -> Result<Self, GeneratorError> {
        match n {
            2 => Ok(Generator::M2(0)),
            n if n >= 3 => Ok(Generator::D(n)),
            _ => Err(GeneratorError::Unknown(format!("d{n}"))),
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Generator::P | Generator::F0 => 0,
            Generator::F1 => 1,
            Generator::M2(_) | Generator::F2(_) => 2,
            Generator::M3(_) | Generator::F3(_) => 3,
            Generator::D(n) => n as usize,
        }
    }

    pub fn degree(self) -> i64 {
        match self {
            Generator::P | Generator::F0 | Generator::F1 => 0,
            Generator::M2(k) | Generator::M3(k) | Generator::F2(k) | Generator::F3(k) => k as i64,
            Generator::D(n) => n as i64 - 2,
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Generator::F0 | Generator::F1 | Generator::F2(_) | Generator::F3(_) => Kind::Bimodule,
            _ => Kind::Operad,
        }
    }

    pub fn is_valid(self) -> bool {
        match self {
            Generator::M3(k) => k >= 1,
            Generator::D(n) => n >= 3,
            Generator::F2(k) => k >= 1,
            Generator::F3(k) => k >= 2,
            _ => true,
        }
    }

    /// Whether the differential of this generator is known.
    pub fn is_tabulated(self) -> bool {
        match self {
            Generator::M3(k) => k == 1,
            Generator::F3(k) => k == 2,
            g => g.is_valid(),
        }
    }

    pub fn name(self) -> String {
        match self {
            Generator::P => "p".into(),
            Generator::M2(k) => format!("m2_{k}"),
            Generator::M3(k) => format!("m3_{k}"),
            Generator::D(n) => format!("d{n}"),
            Generator::F0 => "f0_0".into(),
            Generator::F1 => "f1_0".into(),
            Generator::F2(k) => format!("f2_{k}"),
            Generator::F3(k) => format!("f3_{k}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, GeneratorError> {
        let unknown = || GeneratorError::Unknown(s.to_string());
        let num = |t: &str| t.parse::<u32>().map_err(|_| unknown());
        let g = match s {
            "p" => Generator::P,
            "f0_0" => Generator::F0,
            "f1_0" => Generator::F1,
            _ => {
                if let Some(k) = s.strip_prefix("m2_") {
                    Generator::M2(num(k)?)
                } else if let Some(k) = s.strip_prefix("m3_") {
                    Generator::M3(num(k)?)
                } else if let Some(k) = s.strip_prefix("f2_") {
                    Generator::F2(num(k)?)
                } else if let Some(k) = s.strip_prefix("f3_") {
                    Generator::F3(num(k)?)
                } else if let Some(n) = s.strip_prefix('d') {
                    return Generator::d(num(n)?);
                } else {
                    return Err(unknown());
                }
            }
        };
        if g.is_valid() {
            Ok(g)
        } else {
            Err(unknown())
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
