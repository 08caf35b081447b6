n = int(input())
m = 1
while n > 1:
    m = m * n
    n = n - 1
tmp = n
print(m)
