use std::fmt;
use std::path::Path;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogKind {
    Sensor,
    Computer,
    Battery,
    Actuator,
    Algorithm,
}

impl CatalogKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sensor" => Some(Self::Sensor),
            "computer" => Some(Self::Computer),
            "battery" => Some(Self::Battery),
            "actuator" => Some(Self::Actuator),
            "algorithm" => Some(Self::Algorithm),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Sensor => "sensor",
            Self::Computer => "computer",
            Self::Battery => "battery",
            Self::Actuator => "actuator",
            Self::Algorithm => "algorithm",
        }
    }

    /// Numeric columns every file of this kind must carry, after `name`.
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            Self::Sensor => &["resolution_px", "frame_rate_hz", "cost_chf", "mass_kg", "power_w"],
            Self::Computer => &["computation_gops", "cost_chf", "mass_kg", "power_w"],
            // pack mass = capacity / specific energy, pack cost = capacity / specific cost
            Self::Battery => &[
                "capacity_wh",
                "specific_energy_wh_per_kg",
                "specific_cost_wh_per_chf",
                "cycle_life",
            ],
            // power = idle + per_lift * lift + per_effort * effort
            Self::Actuator => &[
                "max_lift_n",
                "max_torque_nm",
                "speed_mps",
                "cost_chf",
                "mass_kg",
                "idle_power_w",
                "power_per_lift_w_per_n",
                "power_per_effort_w",
            ],
            Self::Algorithm => &["frequency_hz", "accuracy", "computation_gops"],
        }
    }
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("line 1: missing `# kind: <kind>` header")]
    MissingKind,
    #[error("line {line}: unknown catalog kind `{kind}`")]
    UnknownKind { line: u64, kind: String },
    #[error("missing column `{column}` for {kind} catalog")]
    MissingColumn { kind: CatalogKind, column: String },
    #[error("line {line}: field `{field}`: cannot parse `{value}` as a number")]
    BadValue { line: u64, field: String, value: String },
    #[error("line {line}: field `{field}`: value {value} must be finite and nonnegative")]
    OutOfRange { line: u64, field: String, value: f64 },
    #[error("line {line}: duplicate name `{name}`")]
    DuplicateName { line: u64, name: String },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("catalog has no entries")]
    Empty,
    #[error("expected a {expected} catalog, found {found}")]
    WrongKind { expected: CatalogKind, found: CatalogKind },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub values: Vec<f64>,
}

/// Rows of one component kind; `values` follow [`CatalogKind::columns`].
#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    pub kind: CatalogKind,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value of `column` in row `i`. Panics on an unknown column.
    pub fn value(&self, i: usize, column: &str) -> f64 {
        let k = self
            .kind
            .columns()
            .iter()
            .position(|c| *c == column)
            .unwrap_or_else(|| panic!("{} catalogs have no column `{column}`", self.kind));
        self.entries[i].values[k]
    }

    pub fn column(&self, column: &str) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i, column)).collect()
    }

    pub fn expect_kind(self, kind: CatalogKind) -> Result<Self, CatalogError> {
        if self.kind != kind {
            return Err(CatalogError::WrongKind {
                expected: kind,
                found: self.kind,
            });
        }
        Ok(self)
    }
}

fn kind_header(text: &str) -> Result<CatalogKind, CatalogError> {
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let Some(rest) = t.strip_prefix('#') else {
            break;
        };
        if let Some(k) = rest.trim().strip_prefix("kind:") {
            let k = k.trim();
            return CatalogKind::parse(k).ok_or(CatalogError::UnknownKind {
                line: i as u64 + 1,
                kind: k.to_string(),
            });
        }
    }
    Err(CatalogError::MissingKind)
}

/// Parses a CSV catalog whose leading comment block contains `# kind: <kind>`.
pub fn load_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let kind = kind_header(text)?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header_line = |e: &csv::Error| e.position().map(|p| p.line()).unwrap_or(1);
    let headers = rdr
        .headers()
        .map_err(|e| CatalogError::Csv {
            line: header_line(&e),
            message: e.to_string(),
        })?
        .clone();
    let find = |c: &str| headers.iter().position(|h| h == c);
    let name_col = find("name").ok_or(CatalogError::MissingColumn {
        kind,
        column: "name".into(),
    })?;
    let cols = kind
        .columns()
        .iter()
        .map(|c| {
            find(c).ok_or(CatalogError::MissingColumn {
                kind,
                column: (*c).to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut entries: Vec<CatalogEntry> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CatalogError::Csv {
            line: header_line(&e),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let name = rec.get(name_col).unwrap_or("").to_string();
        if name.is_empty() {
            return Err(CatalogError::Csv {
                line,
                message: "empty name".into(),
            });
        }
        if entries.iter().any(|e| e.name == name) {
            return Err(CatalogError::DuplicateName { line, name });
        }
        let mut values = Vec::with_capacity(cols.len());
        for (c, &k) in kind.columns().iter().zip(&cols) {
            let raw = rec.get(k).unwrap_or("");
            let v: f64 = raw.parse().map_err(|_| CatalogError::BadValue {
                line,
                field: (*c).to_string(),
                value: raw.to_string(),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(CatalogError::OutOfRange {
                    line,
                    field: (*c).to_string(),
                    value: v,
                });
            }
            values.push(v);
        }
        entries.push(CatalogEntry { name, values });
    }
    if entries.is_empty() {
        return Err(CatalogError::Empty);
    }
    Ok(Catalog { kind, entries })
}

pub fn load_catalog_file(path: &Path) -> Result<Catalog, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_catalog(&text)
}
