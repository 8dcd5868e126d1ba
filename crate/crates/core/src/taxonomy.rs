//! The eight diagnostic categories and their canonical order.
//!
//! Every file format and report in this crate lays classes out in the order
//! of [`ClassId::ALL`]: `MEL, NV, BCC, AKIEC, BKL, DF, VASC, ATYP_NV`.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const NUM_CLASSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum ClassId {
    /// Melanoma.
    Mel = 0,
    /// Melanocytic nevus.
    Nv = 1,
    /// Basal cell carcinoma.
    Bcc = 2,
    /// Actinic keratosis and intraepithelial carcinoma.
    Akiec = 3,
    /// Benign keratosis.
    Bkl = 4,
    /// Dermatofibroma.
    Df = 5,
    /// Vascular lesion.
    Vasc = 6,
    /// Atypical nevus (PH² only).
    AtypNv = 7,
}

impl ClassId {
    pub const ALL: [ClassId; NUM_CLASSES] = [
        ClassId::Mel,
        ClassId::Nv,
        ClassId::Bcc,
        ClassId::Akiec,
        ClassId::Bkl,
        ClassId::Df,
        ClassId::Vasc,
        ClassId::AtypNv,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<ClassId> {
        Self::ALL.get(index).copied()
    }

    /// Symbolic code used in manifests, score-file headers and operator files.
    pub fn code(self) -> &'static str {
        match self {
            ClassId::Mel => "MEL",
            ClassId::Nv => "NV",
            ClassId::Bcc => "BCC",
            ClassId::Akiec => "AKIEC",
            ClassId::Bkl => "BKL",
            ClassId::Df => "DF",
            ClassId::Vasc => "VASC",
            ClassId::AtypNv => "ATYP_NV",
        }
    }

    /// Column heading used in rendered result tables.
    pub fn table_heading(self) -> &'static str {
        match self {
            ClassId::Mel => "Mel",
            ClassId::Nv => "NV",
            ClassId::Bcc => "BCC",
            ClassId::Akiec => "AKIEC",
            ClassId::Bkl => "BK",
            ClassId::Df => "DF",
            ClassId::Vasc => "VASC",
            ClassId::AtypNv => "Atyp NV",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ClassId::Mel => "melanoma",
            ClassId::Nv => "melanocytic nevus",
            ClassId::Bcc => "basal cell carcinoma",
            ClassId::Akiec => "actinic keratosis / intraepithelial carcinoma",
            ClassId::Bkl => "benign keratosis",
            ClassId::Df => "dermatofibroma",
            ClassId::Vasc => "vascular lesion",
            ClassId::AtypNv => "atypical nevus",
        }
    }

    /// Maps a HAM10000 `dx` code onto the taxonomy.
    ///
    /// | dx    | class |
    /// |-------|-------|
    /// | nv    | NV    |
    /// | mel   | MEL   |
    /// | bcc   | BCC   |
    /// | akiec | AKIEC |
    /// | bkl   | BKL   |
    /// | df    | DF    |
    /// | vasc  | VASC  |
    pub fn from_ham10000_code(dx: &str) -> Option<ClassId> {
        match dx.trim().to_ascii_lowercase().as_str() {
            "nv" => Some(ClassId::Nv),
            "mel" => Some(ClassId::Mel),
            "bcc" => Some(ClassId::Bcc),
            "akiec" => Some(ClassId::Akiec),
            "bkl" => Some(ClassId::Bkl),
            "df" => Some(ClassId::Df),
            "vasc" => Some(ClassId::Vasc),
            _ => None,
        }
    }

    /// Maps a PH² clinical diagnosis onto the taxonomy. Accepts the numeric
    /// codes of the PH² release (`0` common nevus, `1` atypical nevus,
    /// `2` melanoma) or the spelled-out names.
    pub fn from_ph2_diagnosis(value: &str) -> Option<ClassId> {
        let v = value.trim().to_ascii_lowercase().replace(['_', '-'], " ");
        match v.as_str() {
            "0" | "common nevus" | "common nevi" => Some(ClassId::Nv),
            "1" | "atypical nevus" | "atypical nevi" => Some(ClassId::AtypNv),
            "2" | "melanoma" => Some(ClassId::Mel),
            _ => None,
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        ClassId::ALL
            .iter()
            .copied()
            .find(|c| c.code().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

impl Serialize for ClassId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for ClassId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A value for each of the eight classes, indexable by [`ClassId`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassMap<T>(pub [T; NUM_CLASSES]);

impl<T> ClassMap<T> {
    pub fn from_fn(mut f: impl FnMut(ClassId) -> T) -> Self {
        ClassMap(std::array::from_fn(|i| f(ClassId::ALL[i])))
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClassId, &T)> {
        ClassId::ALL.iter().copied().zip(self.0.iter())
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.0.iter()
    }
}

impl<T> Index<ClassId> for ClassMap<T> {
    type Output = T;

    fn index(&self, c: ClassId) -> &T {
        &self.0[c.index()]
    }
}

impl<T> IndexMut<ClassId> for ClassMap<T> {
    fn index_mut(&mut self, c: ClassId) -> &mut T {
        &mut self.0[c.index()]
    }
}
