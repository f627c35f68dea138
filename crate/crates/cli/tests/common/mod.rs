#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

pub fn mfsinr(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfsinr"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Parsed output file: header settings and columns by name.
#[derive(Debug, Clone)]
pub struct Csv {
    pub header: BTreeMap<String, String>,
    pub names: Vec<String>,
    pub columns: BTreeMap<String, Vec<String>>,
}

impl Csv {
    pub fn read(path: &Path) -> Csv {
        Csv::parse(&std::fs::read_to_string(path).expect("output file exists"))
    }

    pub fn parse(text: &str) -> Csv {
        let mut header = BTreeMap::new();
        let mut lines = text.lines().peekable();
        while let Some(l) = lines.next_if(|l| l.starts_with('#')) {
            let (k, v) = l[1..].trim().split_once('=').expect("key=value header");
            header.insert(k.to_string(), v.to_string());
        }
        let names: Vec<String> = lines.next().expect("column names").split(',').map(String::from).collect();
        let mut columns: BTreeMap<String, Vec<String>> = names.iter().map(|n| (n.clone(), Vec::new())).collect();
        for l in lines {
            for (n, cell) in names.iter().zip(l.split(',')) {
                columns.get_mut(n).unwrap().push(cell.to_string());
            }
        }
        Csv { header, names, columns }
    }

    pub fn col(&self, name: &str) -> Vec<f64> {
        self.columns
            .get(name)
            .unwrap_or_else(|| panic!("no column {name}; have {:?}", self.names))
            .iter()
            .map(|c| c.parse().unwrap_or_else(|_| panic!("{name}: bad cell {c}")))
            .collect()
    }
}
