//! Heap-tracking allocator for peak-memory measurements.
//!
//! Peak *additional* allocation is measured inside the process rather than
//! via OS RSS, for cross-platform stability. Binaries that want memory
//! rows opt in with:
//!
//! ```ignore
//! #[global_allocator]
//! static ALLOC: mmd_harness::alloc::TrackingAllocator = mmd_harness::alloc::TrackingAllocator;
//! ```
//!
//! Without the installation the counters stay at zero and benchmark rows
//! simply omit memory figures.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

static ALLOCATED: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

pub struct TrackingAllocator;

impl TrackingAllocator {
    fn record_alloc(size: usize) {
        let now = ALLOCATED.fetch_add(size, Ordering::Relaxed) + size;
        PEAK.fetch_max(now, Ordering::Relaxed);
    }

    fn record_dealloc(size: usize) {
        ALLOCATED.fetch_sub(size, Ordering::Relaxed);
    }
}

unsafe impl GlobalAlloc for TrackingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let ptr = System.alloc(layout);
        if !ptr.is_null() {
            Self::record_alloc(layout.size());
        }
        ptr
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        Self::record_dealloc(layout.size());
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let out = System.realloc(ptr, layout, new_size);
        if !out.is_null() {
            Self::record_dealloc(layout.size());
            Self::record_alloc(new_size);
        }
        out
    }
}

/// Bytes currently allocated (zero when the allocator is not installed).
pub fn current_bytes() -> usize {
    ALLOCATED.load(Ordering::Relaxed)
}

/// High-water mark since the last [`reset_peak`].
pub fn peak_bytes() -> usize {
    PEAK.load(Ordering::Relaxed)
}

/// Restart peak tracking from the current allocation level.
pub fn reset_peak() {
    PEAK.store(ALLOCATED.load(Ordering::Relaxed), Ordering::Relaxed);
}

/// True when a tracking allocator has recorded any traffic.
pub fn is_active() -> bool {
    peak_bytes() > 0
}
