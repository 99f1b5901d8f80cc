//! Sweep grids and their CSV form.
//!
//! Every number in a record is quantized to 9 significant digits at record
//! construction, so the emitted file and the in-memory grid are the same
//! data: re-parsing a CSV reproduces the records bit for bit.

/// CSV header of a sweep grid.
pub const CSV_HEADER: &str = "B,T,energy,e_sep,delta_e,concurrence,eof,detected";

/// Formats with 9 significant digits and no superfluous characters, like
/// printf's %.9g: fixed notation for moderate exponents, scientific beyond,
/// trailing zeros trimmed.
pub fn fmt_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.8e}", x);
    let epos = sci.find('e').expect("exponential format");
    let exp: i32 = sci[epos + 1..].parse().expect("exponent parses");
    let trim = |mut s: String| {
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        s
    };
    if (-4..=8).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(sci[..epos].to_string()), exp)
    }
}

/// Rounds to the value that `fmt_g9` prints.
pub fn quantize(x: f64) -> f64 {
    fmt_g9(x).parse().expect("g9 output parses back")
}

/// One sweep axis: start, stop inclusive within half a step, uniform step.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisSpec {
    pub fn single(v: f64) -> Self {
        AxisSpec {
            start: v,
            stop: v,
            step: 1.0,
        }
    }

    /// Parses "VALUE" or "START:STOP:STEP".
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{}' is not a number", s))
        };
        match parts.len() {
            1 => Ok(AxisSpec::single(num(parts[0])?)),
            3 => {
                let spec = AxisSpec {
                    start: num(parts[0])?,
                    stop: num(parts[1])?,
                    step: num(parts[2])?,
                };
                if spec.stop < spec.start {
                    return Err(format!("stop {} is below start {}", spec.stop, spec.start));
                }
                if spec.step <= 0.0 && spec.stop != spec.start {
                    return Err(format!("step must be positive, got {}", spec.step));
                }
                Ok(spec)
            }
            _ => Err(format!("'{}' is not VALUE or START:STOP:STEP", text)),
        }
    }

    /// Grid points start, start+step, ..., up to stop inclusive within half
    /// a step.  Points are computed multiplicatively to avoid drift.
    pub fn values(&self) -> Vec<f64> {
        if self.stop == self.start || self.step <= 0.0 {
            return vec![self.start];
        }
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let v = self.start + f64::from(i) * self.step;
            if v > self.stop + self.step / 2.0 {
                break;
            }
            out.push(v);
            i += 1;
        }
        out
    }
}

/// One grid point.  All fields are already quantized; `detected` is 1
/// exactly when `delta_e` is negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub b: f64,
    pub t: f64,
    pub energy: f64,
    pub e_sep: f64,
    pub delta_e: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub detected: u8,
}

impl SweepRecord {
    /// Quantizes the raw point values; the witness gap is recomputed from
    /// the quantized energies so the emitted columns stay consistent.
    pub fn from_raw(b: f64, t: f64, energy: f64, e_sep: f64, concurrence: f64, eof: f64) -> Self {
        let energy = quantize(energy);
        let e_sep = quantize(e_sep);
        let delta_e = quantize(energy - e_sep);
        SweepRecord {
            b: quantize(b),
            t: quantize(t),
            energy,
            e_sep,
            delta_e,
            concurrence: quantize(concurrence),
            eof: quantize(eof),
            detected: u8::from(delta_e < 0.0),
        }
    }

    fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_g9(self.b),
            fmt_g9(self.t),
            fmt_g9(self.energy),
            fmt_g9(self.e_sep),
            fmt_g9(self.delta_e),
            fmt_g9(self.concurrence),
            fmt_g9(self.eof),
            self.detected
        )
    }
}

/// A complete (B, T) grid: one record per combination, ordered by B then T.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    b_axis: AxisSpec,
    t_axis: AxisSpec,
    records: Vec<SweepRecord>,
}

impl SweepGrid {
    /// Records must arrive in row-major (B outer, T inner) order covering
    /// every grid point exactly once.
    pub fn new(
        b_axis: AxisSpec,
        t_axis: AxisSpec,
        records: Vec<SweepRecord>,
    ) -> Result<Self, String> {
        let b_values = b_axis.values();
        let t_values = t_axis.values();
        if records.len() != b_values.len() * t_values.len() {
            return Err(format!(
                "{} records for a {}x{} grid",
                records.len(),
                b_values.len(),
                t_values.len()
            ));
        }
        let mut idx = 0;
        for &b in &b_values {
            for &t in &t_values {
                let r = &records[idx];
                if r.b != quantize(b) || r.t != quantize(t) {
                    return Err(format!(
                        "record {} is ({}, {}), expected ({}, {})",
                        idx, r.b, r.t, b, t
                    ));
                }
                if r.detected != u8::from(r.delta_e < 0.0) {
                    return Err(format!("record {} has an inconsistent detected flag", idx));
                }
                idx += 1;
            }
        }
        Ok(SweepGrid {
            b_axis,
            t_axis,
            records,
        })
    }

    pub fn records(&self) -> &[SweepRecord] {
        &self.records
    }

    pub fn b_axis(&self) -> &AxisSpec {
        &self.b_axis
    }

    pub fn t_axis(&self) -> &AxisSpec {
        &self.t_axis
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.to_csv_row());
            out.push('\n');
        }
        out
    }
}

/// Parses a sweep CSV back into records, checking the header and the
/// detected-flag invariant.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(format!("bad header {:?}", other)),
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(format!(
                "line {}: {} fields, expected 8",
                lineno + 2,
                fields.len()
            ));
        }
        let num = |i: usize| {
            fields[i]
                .parse::<f64>()
                .map_err(|_| format!("line {}: '{}' is not a number", lineno + 2, fields[i]))
        };
        let detected = match fields[7] {
            "0" => 0u8,
            "1" => 1u8,
            other => return Err(format!("line {}: detected flag '{}'", lineno + 2, other)),
        };
        let record = SweepRecord {
            b: num(0)?,
            t: num(1)?,
            energy: num(2)?,
            e_sep: num(3)?,
            delta_e: num(4)?,
            concurrence: num(5)?,
            eof: num(6)?,
            detected,
        };
        if record.detected != u8::from(record.delta_e < 0.0) {
            return Err(format!(
                "line {}: detected flag contradicts delta_e",
                lineno + 2
            ));
        }
        records.push(record);
    }
    Ok(records)
}
