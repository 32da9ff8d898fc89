//! Sweep CSV output.

use std::io::{self, Write};

use crate::scenario::SweepRow;

pub const HEADER: &str =
    "p1_db,achievable,upper_new,upper_gepi,upper_trivial,cutset,alpha_star,p1_star,sigma_c2,rho_star";

const SIG_DIGITS: usize = 12;

/// `printf("%.12g")`: 12 significant digits, trailing zeros dropped,
/// exponent form outside `[1e-5, 1e12)`.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl SweepRow {
    fn columns(&self) -> [f64; 10] {
        [
            self.p1_db,
            self.achievable,
            self.upper_new,
            self.upper_gepi,
            self.upper_trivial,
            self.cutset,
            self.alpha_star,
            self.p1_star,
            self.sigma_c2,
            self.rho_star,
        ]
    }

    fn from_columns(v: &[f64]) -> Self {
        SweepRow {
            p1_db: v[0],
            achievable: v[1],
            upper_new: v[2],
            upper_gepi: v[3],
            upper_trivial: v[4],
            cutset: v[5],
            alpha_star: v[6],
            p1_star: v[7],
            sigma_c2: v[8],
            rho_star: v[9],
        }
    }
}

fn into_io(e: ::csv::Error) -> io::Error {
    match e.into_kind() {
        ::csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

pub fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> io::Result<()> {
    let mut w = ::csv::WriterBuilder::new().terminator(::csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER.split(',')).map_err(into_io)?;
    for r in rows {
        w.write_record(r.columns().map(format_sig)).map_err(into_io)?;
    }
    w.flush()
}

/// Reads back what [`emit_csv`] wrote.
pub fn read_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut rdr = ::csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(HEADER.split(',')) {
        return Err("missing or unexpected header".into());
    }
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(|e| e.to_string())?;
            let v: Vec<f64> =
                rec.iter().map(|f| f.parse::<f64>().map_err(|e| format!("`{f}`: {e}"))).collect::<Result<_, _>>()?;
            Ok(SweepRow::from_columns(&v))
        })
        .collect()
}
