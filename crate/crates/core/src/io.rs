//! CSV point clouds of resonances.
//!
//! Columns are `l,twice_nu,re,im,multiplicity` with an optional trailing
//! `family`. The coordinates are those of the resonance itself, in the
//! lower half-plane.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::HalfIntOrder;
use crate::sphere::{Family, ResonanceRecord};

const BASE_HEADER: [&str; 5] = ["l", "twice_nu", "re", "im", "multiplicity"];

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

/// Write records, with the family column if `with_family`.
pub fn write_csv<W: Write>(out: W, records: &[ResonanceRecord], with_family: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = BASE_HEADER.to_vec();
    if with_family {
        header.push("family");
    }
    w.write_record(&header).map_err(io_err)?;
    for r in records {
        let z = r.resonance();
        let mut row = vec![
            r.l.to_string(),
            r.nu.twice_nu().to_string(),
            z.re.to_string(),
            z.im.to_string(),
            r.multiplicity.to_string(),
        ];
        if with_family {
            row.push(r.family.as_str().to_string());
        }
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, k: usize, line: usize) -> Result<T> {
    let raw = rec.get(k).ok_or_else(|| Error::Io(format!("line {line}: missing column {k}")))?;
    raw.trim()
        .parse()
        .map_err(|_| Error::Io(format!("line {line}: cannot parse {raw:?} in column {}", k + 1)))
}

/// Read records written by [`write_csv`]. Rows without a family column are
/// exact sphere resonances.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ResonanceRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(io_err)?.clone();
    let names: Vec<&str> = header.iter().collect();
    let with_family = match names.as_slice() {
        [a, b, c, d, e] if [*a, *b, *c, *d, *e] == BASE_HEADER => false,
        [a, b, c, d, e, "family"] if [*a, *b, *c, *d, *e] == BASE_HEADER => true,
        _ => return Err(Error::Io(format!("unexpected header {names:?}"))),
    };
    let mut out = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(io_err)?;
        let l: u32 = field(&rec, 0, line)?;
        let twice_nu: u32 = field(&rec, 1, line)?;
        let re: f64 = field(&rec, 2, line)?;
        let im: f64 = field(&rec, 3, line)?;
        let multiplicity: u64 = field(&rec, 4, line)?;
        // 2ν = 2l + n − 2
        let n = (twice_nu + 2)
            .checked_sub(2 * l)
            .ok_or_else(|| Error::Io(format!("line {line}: 2ν = {twice_nu} too small for l = {l}")))?;
        let nu = HalfIntOrder::new(l, n).map_err(|e| Error::Io(format!("line {line}: {e}")))?;
        let family = if with_family {
            let name = rec.get(5).unwrap_or("");
            Family::parse(name).ok_or_else(|| Error::Io(format!("line {line}: unknown family {name:?}")))?
        } else {
            Family::SphereExact
        };
        let z = Complex64::new(re, im);
        out.push(ResonanceRecord {
            l,
            nu,
            lambda: if family.stores_conjugate() { z.conj() } else { z },
            multiplicity,
            family,
        });
    }
    Ok(out)
}

/// Dimension shared by all records, if any.
pub fn dimension_of(records: &[ResonanceRecord]) -> Result<Option<u32>> {
    let mut dims = records.iter().map(|r| r.nu.n());
    let Some(first) = dims.next() else {
        return Ok(None);
    };
    if dims.any(|d| d != first) {
        return Err(Error::Io("records mix several dimensions".into()));
    }
    Ok(Some(first))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ResonanceRecord> {
        vec![
            ResonanceRecord {
                l: 1,
                nu: HalfIntOrder::new(1, 3).unwrap(),
                lambda: Complex64::new(0.0, -1.0),
                multiplicity: 3,
                family: Family::SphereExact,
            },
            ResonanceRecord {
                l: 2,
                nu: HalfIntOrder::new(2, 5).unwrap(),
                lambda: Complex64::new(1.25, 0.1 + 0.2),
                multiplicity: 14,
                family: Family::TransparentBoundary,
            },
        ]
    }

    #[test]
    fn header_and_round_trip() {
        let recs = sample();
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs, true).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("l,twice_nu,re,im,multiplicity,family\n"));
        // transparent rows hold the resonance, below the axis
        assert!(text.contains("2,7,1.25,-0.30000000000000004,14,transparent_boundary"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, recs);

        let mut plain = Vec::new();
        write_csv(&mut plain, &recs[..1], false).unwrap();
        assert!(String::from_utf8(plain.clone()).unwrap().starts_with("l,twice_nu,re,im,multiplicity\n"));
        assert_eq!(read_csv(plain.as_slice()).unwrap(), recs[..1].to_vec());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_csv("l,twice_nu,re,im,multiplicity\n1,x,0,0,1\n".as_bytes()).is_err());
        assert!(read_csv("l,twice_nu,re,im,multiplicity\n5,3,0,0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn mixed_dimensions() {
        assert!(dimension_of(&sample()).is_err());
        assert_eq!(dimension_of(&sample()[..1]).unwrap(), Some(3));
        assert_eq!(dimension_of(&[]).unwrap(), None);
    }
}
