//! CSV output. Every file starts with a `#` line naming the schema version and
//! the check; numbers use 17 significant digits so repeated runs compare
//! byte for byte.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

pub const CSV_SCHEMA: u32 = 1;

pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, dir.join(name))
}

fn header(kind: &str, columns: &[String]) -> String {
    format!("# ricci-compare csv-schema={CSV_SCHEMA} {kind} columns={}\n", columns.join(","))
}

pub fn numeric_csv(kind: &str, columns: &[String], rows: &[Vec<f64>]) -> Vec<u8> {
    let mut out = header(kind, columns).into_bytes();
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        w.write_record(columns).expect("in-memory write");
        for row in rows {
            w.write_record(row.iter().map(|x| number(*x))).expect("in-memory write");
        }
        w.flush().expect("in-memory write");
    }
    out
}

pub fn text_csv(kind: &str, columns: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = header(kind, columns).into_bytes();
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        w.write_record(columns).expect("in-memory write");
        for row in rows {
            w.write_record(row).expect("in-memory write");
        }
        w.flush().expect("in-memory write");
    }
    out
}

/// Reads a two-column numeric CSV; `#` lines and a non-numeric header row are skipped.
pub fn read_two_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("{}: {e}", path.display()))?;
        if record.len() != 2 {
            return Err(format!("{}: row {} has {} fields, expected 2", path.display(), i + 1, record.len()));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                xs.push(x);
                ys.push(y);
            }
            _ if i == 0 => continue,
            _ => return Err(format!("{}: row {} is not numeric", path.display(), i + 1)),
        }
    }
    Ok((xs, ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_rows_are_fixed_width() {
        let bytes = numeric_csv("check=x", &["a".into(), "b".into()], &[vec![1.0, -0.1]]);
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(
            text,
            "# ricci-compare csv-schema=1 check=x columns=a,b\na,b\n1.0000000000000000e0,-1.0000000000000001e-1\n"
        );
    }

    #[test]
    fn two_column_reader() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        fs::write(&p, "# comment\nr,f\n0,0\n1, 2.5\n").unwrap();
        assert_eq!(read_two_columns(&p).unwrap(), (vec![0.0, 1.0], vec![0.0, 2.5]));
        fs::write(&p, "0,0\n1,x\n").unwrap();
        assert!(read_two_columns(&p).is_err());
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "a.csv", b"x\n").unwrap();
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, vec![std::ffi::OsString::from("a.csv")]);
    }
}
