package com.acme.util;

public class Helper {
    public int clamp(int value, int max) {
        if (value > max) {
            return max;
        }
        return value;
    }
}
